"""Configuration, catalog and report files for germforge."""
