"""
This module contains the BaseController class, which serves as a base class for the
checking and unification controllers.
"""

import logging
from dataclasses import replace
from typing import Optional

from utils.config import Config

logger = logging.getLogger(__name__)


class BaseController:
    """Base class for all controllers in the application.

    The BaseController holds the shared Config and gives every controller the same
    interface for reading and changing it.
    """

    def __init__(self, config: Optional[Config] = None):
        """Initialize the BaseController with optional configuration.

        Args:
            config: Configuration to use; defaults are used when omitted.
        """
        self.config = config or Config()
        logger.debug(f"{type(self).__name__} initialized with config: {self.config}")

    def update_config(self, **changes):
        """Replace configuration fields and reset any state derived from the old values.

        Args:
            **changes: Config fields to change.

        Raises:
            TypeError: If a field name is unknown.
        """
        if not changes:
            return

        self.config = replace(self.config, **changes)
        logger.debug(f"{type(self).__name__} config updated: {self.config}")
        self.reset()

    def get_config_value(self, key, default=None):
        """Get a configuration value by key.

        Args:
            key: The configuration field to look up
            default: The default value to return if the field does not exist

        Returns:
            The configuration value or the default
        """
        return getattr(self.config, key, default)

    def reset(self):
        """Reset the controller to its initial state.

        This method should be overridden by subclasses to provide
        controller-specific reset functionality.
        """
        logger.debug(f"{type(self).__name__} reset")
