"""Service layer: the analyses behind every command."""
