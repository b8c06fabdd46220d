import inspect
from functools import wraps

def privatemethod(func):
    """
    Restrict a method to calls made from another method of the same instance.

    Used for internal helpers of stateful classes (the gradient tape and the
    JSON builder) whose invariants only hold when driven by the owning object.
    """
    @wraps(func)
    def wrapper(self, *args, **kwargs):
        frame = inspect.currentframe().f_back
        try:
            callerSelf = frame.f_locals.get('self')
        finally:
            del frame

        if callerSelf is not self:
            raise PermissionError(
                f"'{type(self).__name__}.{func.__name__}' is a private method."
            )

        return func(self, *args, **kwargs)

    return wrapper
