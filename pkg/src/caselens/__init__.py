"""caselens: deterministic, auditable analysis of multi-case investigative reports.

The pipeline turns report documents into structured case records (with
provenance spans back to the source text), stores them in an embedded SQLite
database, clusters similar cases in two stages, ranks cases on a 5-10
priority scale, computes aggregate insights, and serves everything to an
analyst dashboard through a read-only HTTP API.
"""

__version__ = "0.1.0"
