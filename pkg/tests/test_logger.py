import logging

from logger import setup_logger


def _close(logger):
    for handler in list(logger.handlers):
        handler.close()
        logger.removeHandler(handler)


def test_log_file_created(tmp_path):
    path = tmp_path / "logs" / "bsa_lab.log"
    logger = setup_logger("BsaLab.test_file", str(path))
    try:
        assert {type(h) for h in logger.handlers} == {logging.StreamHandler, logging.FileHandler}
        assert path.exists()
    finally:
        _close(logger)


def test_unwritable_log_dir_warns_on_stderr(tmp_path, caplog):
    blocker = tmp_path / "blocker"
    blocker.write_text("")
    with caplog.at_level(logging.WARNING, logger="BsaLab.test_readonly"):
        logger = setup_logger("BsaLab.test_readonly", str(blocker / "logs" / "bsa_lab.log"))
    try:
        assert [type(h) for h in logger.handlers] == [logging.StreamHandler]
        assert "logging to stderr only" in caplog.text
    finally:
        _close(logger)
