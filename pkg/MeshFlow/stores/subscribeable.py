"""
Observer base for stores that publish values while a loop runs.
"""

import logging
from dataclasses import dataclass
from typing import Any, Callable, List

logger = logging.getLogger(__name__)

Callback = Callable[[Any], None]

@dataclass(eq=False)
class Subscription:
    callback: Callback
    every: int = 1
    active: bool = True

class Subscribeable:
    """
    Publishes every new value to its subscribers, in subscription order.

    A subscriber may ask for every k-th value only, e.g. to checkpoint a CSV
    file every few optimizer steps. A subscriber that raises is logged and
    skipped; it never stops the loop that published the value.

    Attributes:
        published (int): Number of values published so far.
    """

    def __init__(self, initialValue: Any = None) -> None:
        self._value = initialValue
        self.published = 0
        self.subscriptions: List[Subscription] = []

    def subscribe(self, callback: Callback, every: int = 1) -> Callable[[], None]:
        """
        Args:
            callback (Callable[[Any], None]): Called with each published value.
            every (int): Only values whose 1-based publication count is a
                multiple of this are delivered.

        Returns:
            Callable[[], None]: Cancels this subscription.
        """
        if every < 1:
            raise ValueError(f"Subscription interval must be at least 1, got '{every}'.")
        subscription = Subscription(callback, every)
        self.subscriptions.append(subscription)

        def cancel() -> None:
            subscription.active = False
            if subscription in self.subscriptions:
                self.subscriptions.remove(subscription)

        return cancel

    def unsubscribe(self, callback: Callback) -> None:
        for subscription in [s for s in self.subscriptions if s.callback == callback]:
            subscription.active = False
            self.subscriptions.remove(subscription)

    @property
    def value(self) -> Any:
        """The last published value."""
        return self._value

    @value.setter
    def value(self, newValue: Any) -> None:
        self.publish(newValue)

    def publish(self, newValue: Any) -> None:
        self._value = newValue
        self.published += 1
        for subscription in list(self.subscriptions):
            if not subscription.active or self.published % subscription.every:
                continue
            try:
                subscription.callback(newValue)
            except Exception as e:
                logger.error(f"Subscriber '{getattr(subscription.callback, '__name__', subscription.callback)}' failed on value {self.published}: '{e}'.")
