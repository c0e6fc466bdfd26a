import logging.config

import yaml

from app import settings


def configure_logging(level: str | None = None) -> None:
    with open(settings.LOGGING_CONFIG_PATH) as f:
        config = yaml.safe_load(f.read())
        if level is not None:
            config["root"]["level"] = level
            config["handlers"]["console"]["level"] = level
        logging.config.dictConfig(config)
