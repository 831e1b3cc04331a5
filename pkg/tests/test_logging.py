"""Tests for logging setup."""

import logging
from logging.handlers import RotatingFileHandler

from edpn.core import logging as edpn_logging
from edpn.core.logging import setup_logging


class TestSetupLogging:
    def test_stderr_only_by_default(self):
        logger = setup_logging(level="debug")
        assert logger.name == "edpn"
        assert logger.level == logging.DEBUG
        assert len(logger.handlers) == 1
        assert not isinstance(logger.handlers[0], RotatingFileHandler)

    def test_unknown_level_falls_back_to_warning(self):
        logger = setup_logging(level="chatty")
        assert logger.level == logging.WARNING

    def test_repeated_setup_replaces_handlers(self):
        setup_logging()
        logger = setup_logging()
        assert len(logger.handlers) == 1

    def test_rotating_file(self, tmp_path, monkeypatch):
        monkeypatch.setattr(edpn_logging, "LOGS_DIR", tmp_path)
        logger = setup_logging(log_file="edpn.log", max_bytes=1024, backup_count=1)
        try:
            file_handlers = [h for h in logger.handlers if isinstance(h, RotatingFileHandler)]
            assert len(file_handlers) == 1
            assert file_handlers[0].maxBytes == 1024
            logging.getLogger("edpn.test").warning("written")
            file_handlers[0].flush()
            assert "written" in (tmp_path / "edpn.log").read_text(encoding="utf-8")
        finally:
            for handler in logger.handlers:
                handler.close()
            logger.handlers.clear()
