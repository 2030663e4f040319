"""Fixtures compartidos para tests (datasets espirales y redes pequeñas)."""
