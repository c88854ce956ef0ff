"""
Storage Layer

Purpose: Keep structured harness documents so earlier runs can be looked up
and compared with a replay.

Design Ideas:
- One SQLite table, one row per CLI invocation that asked for archiving
- The document is stored exactly as printed (JSON text); config goes in its own
  JSON column so runs can be found by command and parameters
- The archive may carry a created_at column; the documents themselves never do
"""

import json
import logging
import sqlite3
from typing import Any, Dict, List, Optional

import config
from src.errors import ConfigError

logger = logging.getLogger(__name__)


class ReportStorage:
    """
    Report archive

    Stores structured documents produced by the harness commands, keyed by an
    autoincrement id.
    """

    def __init__(self, db_path: str = config.ARCHIVE_PATH):
        """
        Initialize report storage.

        Args:
            db_path: Path to SQLite database file (":memory:" is not useful here,
                every call opens its own connection)
        """
        self.db_path = db_path
        self.init_database()

    def _connect(self) -> sqlite3.Connection:
        try:
            conn = sqlite3.connect(self.db_path)
        except sqlite3.Error as e:
            raise ConfigError(f"cannot open archive {self.db_path}: {e}") from e
        conn.row_factory = sqlite3.Row
        return conn

    def init_database(self):
        """
        Create the reports table if it is missing.
        """
        conn = self._connect()
        try:
            cursor = conn.cursor()
            cursor.execute('''
                CREATE TABLE IF NOT EXISTS reports (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    command TEXT NOT NULL,
                    config TEXT,          -- JSON object
                    ok INTEGER NOT NULL,
                    document TEXT NOT NULL,
                    created_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP
                )
            ''')
            cursor.execute('CREATE INDEX IF NOT EXISTS idx_command ON reports(command)')
            conn.commit()
        except sqlite3.Error as e:
            raise ConfigError(f"cannot initialise archive {self.db_path}: {e}") from e
        finally:
            conn.close()

    def store_report(self, command: str, run_config: Dict[str, Any], document: str,
                     ok: bool) -> int:
        """
        Store one structured document.

        Args:
            command: CLI subcommand that produced it
            run_config: The document's config section
            document: The JSON text exactly as printed
            ok: Whether every checked property held

        Returns:
            Row id of the stored report
        """
        conn = self._connect()
        try:
            cursor = conn.cursor()
            cursor.execute(
                'INSERT INTO reports (command, config, ok, document) VALUES (?, ?, ?, ?)',
                (command, json.dumps(run_config, sort_keys=True), int(bool(ok)), document),
            )
            conn.commit()
            report_id = cursor.lastrowid
        except sqlite3.Error as e:
            raise ConfigError(f"cannot store report in {self.db_path}: {e}") from e
        finally:
            conn.close()
        logger.info("archived %s report as #%d", command, report_id)
        return report_id

    def get_report(self, report_id: int) -> Optional[Dict[str, Any]]:
        """
        Retrieve a report by id.

        Returns:
            Dict with id, command, config, ok, document (parsed), created_at; None if absent
        """
        conn = self._connect()
        try:
            row = conn.execute('SELECT * FROM reports WHERE id = ?', (report_id,)).fetchone()
        finally:
            conn.close()
        if not row:
            return None
        return self._row_to_dict(row)

    def list_reports(self, command: Optional[str] = None) -> List[Dict[str, Any]]:
        """
        All stored reports in id order, optionally only those of one command.
        """
        conn = self._connect()
        try:
            if command is None:
                rows = conn.execute('SELECT * FROM reports ORDER BY id').fetchall()
            else:
                rows = conn.execute(
                    'SELECT * FROM reports WHERE command = ? ORDER BY id', (command,)
                ).fetchall()
        finally:
            conn.close()
        return [self._row_to_dict(row) for row in rows]

    @staticmethod
    def _row_to_dict(row: sqlite3.Row) -> Dict[str, Any]:
        report = dict(row)
        report['ok'] = bool(report['ok'])
        for json_field in ['config', 'document']:
            if report.get(json_field):
                report[json_field] = json.loads(report[json_field])
        return report
