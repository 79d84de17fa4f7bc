"""tablevet: appraise the reuse-worthiness of captured decision tables."""

__version__ = "0.1.0"
