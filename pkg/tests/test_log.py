import logging

import pytest

from utils.log import configure_logging


@pytest.mark.parametrize("verbosity,level", [(0, logging.WARNING), (1, logging.INFO), (2, logging.DEBUG), (5, logging.DEBUG)])
def test_verbosity_levels(verbosity, level):
    configure_logging(verbosity)
    assert logging.getLogger().level == level


def test_repeated_setup_keeps_one_handler():
    configure_logging(1)
    configure_logging(2)
    ours = [h for h in logging.getLogger().handlers if getattr(h, "_nevanlab", False)]
    assert len(ours) == 1
