"""
sumproto
One-round coordinator protocols for SUM-DIST and SUM-EQUAL, with exact
communication accounting, correctness oracles and a lower-bound adversary.
"""
