from .privateMethod import privatemethod

__all__ = ['privatemethod']