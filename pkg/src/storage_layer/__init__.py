"""
Storage Layer
SQLite archive of structured harness documents
"""

from .storage import ReportStorage

__all__ = ['ReportStorage']
