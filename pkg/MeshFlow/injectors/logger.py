"""
This module defines a decorator for injecting a logger into a class.

The `logger` decorator adds a `Logger` attribute to a class. The logger is named
after the class's module unless a name is given, so records emitted by the
decorated class are filtered and formatted with the rest of the package.
"""

import logging

def logger(name: str | None = None):
    """
    A decorator that injects a `logging.Logger` into a class.

    Args:
        name (str, optional): Logger name. Defaults to the module of the decorated class.

    Returns:
        decorator: A class decorator that adds the `Logger` attribute.
    """

    def decorator(cls):
        """
        Decorates the class to add the `Logger` attribute.

        Args:
            cls: The class to decorate.

        Returns:
            cls: The decorated class with the `Logger` attribute.
        """
        cls.Logger = logging.getLogger(name or cls.__module__)

        return cls

    return decorator
