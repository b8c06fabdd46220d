from .config import RunConfig, parseConfig, loadConfig, schemaLines
from .manifest import readManifest
from .commands import Commands, parseTimes
from .main import main, buildParser

__all__ = [
    'RunConfig', 'parseConfig', 'loadConfig', 'schemaLines', 'readManifest',
    'Commands', 'parseTimes', 'main', 'buildParser'
]
