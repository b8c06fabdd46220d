from .subscribeable import Subscribeable
from .lossTrace import LossTrace, TraceRow

__all__ = ['Subscribeable', 'LossTrace', 'TraceRow']
