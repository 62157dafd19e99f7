"""equiloc: exact verification engine for finite-group localization theorems."""

__version__ = "0.1.0"
