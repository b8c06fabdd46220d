from .file import File
from .folder import Folder
from .jsonf import JSON

__all__ = ['File', 'Folder', 'JSON']
