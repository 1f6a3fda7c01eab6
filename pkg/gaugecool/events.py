"""
Events of the Langevin-time scheduler.

.. autosummary::

    ~gaugecool.events.Event
    ~gaugecool.events.Timeout
    ~gaugecool.events.Process

A run is described by processes: generators that yield
:class:`Timeout` events to wait for a stretch of Langevin time, during which
the environment integrates the dynamics. For example the sampler of
:func:`~gaugecool.langevin.run_chain` is essentially::

    def sampler(env, chain, schedule):
        yield env.timeout(schedule.burn_in_time)
        for _ in range(schedule.num_samples):
            yield env.timeout(schedule.sample_interval)
            record(chain.config)

An event goes through three states. It is *pending* until it gets a value
through :meth:`Event.succeed`, :meth:`Event.fail` or :meth:`Event.trigger`,
which also puts it on the environment's queue. It is *triggered* while it
waits there, and *processed* once the environment has called its callbacks.

"""
import linecache
from enum import IntEnum
from typing import TYPE_CHECKING, Any, Callable, Generator, List, Optional

if TYPE_CHECKING:  # Avoid circular import
    from gaugecool.core import Environment

PENDING: object = object()
"""Value of an event that has not been triggered yet."""


class EventPriority(IntEnum):
    """Order of events scheduled for the same tick."""

    URGENT = 0
    NORMAL = 1


URGENT = EventPriority.URGENT
"""Priority of process starts and of the *until* marker of
:meth:`~gaugecool.core.Environment.run`."""
NORMAL = EventPriority.NORMAL
"""Priority of all other events."""


def forward(exc: BaseException) -> BaseException:
    """Return a copy of *exc* chained to the original.

    Every receiver of a failure gets its own copy, so tracebacks collected
    while one receiver handles it do not show up in the others.

    """
    copy = type(exc)(*exc.args)
    copy.__cause__ = exc
    return copy


class Event:
    """Something that happens at a tick of Langevin time.

    *env* is the :class:`~gaugecool.core.Environment` the event belongs to.
    Once processed, every function in :attr:`callbacks` is called with the
    event. A failed event crashes :meth:`~gaugecool.core.Environment.step`
    unless one of them sets :attr:`defused`.

    """

    _ok: bool
    _defused: bool
    _value: Any = PENDING

    def __init__(self, env: 'Environment'):
        self.env = env
        self.callbacks: EventCallbacks = []
        """Called with the event once it is processed; ``None`` afterwards."""

    def __repr__(self) -> str:
        return f'<{self._desc()} object at {id(self):#x}>'

    def _desc(self) -> str:
        return f'{type(self).__name__}()'

    @property
    def triggered(self) -> bool:
        """``True`` once the event has a value and sits in the queue."""
        return self._value is not PENDING

    @property
    def processed(self) -> bool:
        """``True`` once the callbacks have been called."""
        return self.callbacks is None

    @property
    def ok(self) -> bool:
        """Whether the event succeeded. Raise :exc:`AttributeError` while
        the event is pending."""
        return self._ok

    @property
    def defused(self) -> bool:
        """Whether the failure of this event has been handled."""
        return hasattr(self, '_defused')

    @defused.setter
    def defused(self, value: bool) -> None:
        self._defused = True

    @property
    def value(self) -> Optional[Any]:
        """The value of a triggered event (an exception for failed ones).

        Raise :exc:`AttributeError` while the event is pending.

        """
        if self._value is PENDING:
            raise AttributeError(f'Value of {self} is not yet available')
        return self._value

    def _settle(self, ok: bool, value: Any) -> None:
        if self._value is not PENDING:
            raise RuntimeError(f'{self} has already been triggered')
        self._ok = ok
        self._value = value
        self.env.schedule(self)

    def trigger(self, event: 'Event') -> None:
        """Copy the outcome of *event* and schedule this event. Fits as a
        callback of *event*."""
        self._settle(event._ok, event._value)

    def succeed(self, value: Optional[Any] = None) -> 'Event':
        """Schedule the event with *value* and return it.

        Raise :exc:`RuntimeError` if the event has already been triggered.

        """
        self._settle(True, value)
        return self

    def fail(self, exception: BaseException) -> 'Event':
        """Schedule the event as failed with *exception* and return it.

        Raise :exc:`ValueError` if *exception* is not an exception and
        :exc:`RuntimeError` if the event has already been triggered.

        """
        if not isinstance(exception, BaseException):
            raise ValueError(f'{exception} is not an exception.')
        self._settle(False, exception)
        return self


EventCallback = Callable[[Event], None]
EventCallbacks = List[EventCallback]


class Timeout(Event):
    """An event that succeeds with *value* after *delay* units of Langevin
    time. It is scheduled on creation.

    Raise :exc:`ValueError` unless *delay* is a non-negative whole number of
    steps.

    """

    def __init__(
        self,
        env: 'Environment',
        delay: float,
        value: Optional[Any] = None,
    ):
        ticks = env.ticks(delay)
        # Event.__init__ is inlined; timeouts are the most frequent event.
        self.env = env
        self.callbacks = []
        self._ok = True
        self._value = value
        self._delay = delay
        env.schedule(self, NORMAL, ticks)

    def _desc(self) -> str:
        extra = '' if self._value is None else f', value={self._value}'
        return f'{type(self).__name__}({self._delay}{extra})'


class Initialize(Event):
    """Starts a :class:`Process` at the current tick, ahead of the other
    events of that tick."""

    def __init__(self, env: 'Environment', process: 'Process'):
        self.env = env
        self.callbacks = [process._resume]
        self._ok = True
        self._value = None
        env.schedule(self, URGENT)


ProcessGenerator = Generator[Event, Any, Any]


class Process(Event):
    """Runs *generator*, resuming it whenever the event it yielded has been
    processed.

    The generator receives the value of a successful event; the exception
    of a failed one is raised inside it (see :func:`forward`). The process
    is an event in its own right: it succeeds with the generator's return
    value or fails with the exception that escaped it.

    """

    def __init__(self, env: 'Environment', generator: ProcessGenerator):
        if not hasattr(generator, 'throw'):
            raise ValueError(f'{generator} is not a generator.')
        self.env = env
        self.callbacks = []
        self._generator = generator
        self._target: Event = Initialize(env, self)

    def _desc(self) -> str:
        name = getattr(self._generator, '__name__', '?')
        return f'{type(self).__name__}({name})'

    @property
    def target(self) -> Event:
        """The event the process waits for."""
        return self._target

    @property
    def is_alive(self) -> bool:
        """``True`` until the generator has returned or raised."""
        return self._value is PENDING

    def _advance(self, event: Event) -> Optional[Event]:
        """Feed the outcome of *event* to the generator and return the next
        event it yields, or ``None`` once it has finished. A finished
        generator settles the process."""
        try:
            if event._ok:
                return self._generator.send(event._value)
            event._defused = True
            return self._generator.throw(forward(event._value))
        except StopIteration as stop:
            self._settle(True, stop.value)
        except BaseException as exc:
            # Hide this frame from the traceback.
            exc.__traceback__ = exc.__traceback__.tb_next  # type: ignore
            self._settle(False, exc)
        return None

    def _resume(self, event: Event) -> None:
        self.env._active_proc = self
        while True:
            following = self._advance(event)
            if following is None:
                break
            callbacks = getattr(following, 'callbacks', PENDING)
            if callbacks is PENDING:
                raise _invalid_yield(self._generator, following)
            if callbacks is not None:
                callbacks.append(self._resume)
                self._target = following
                break
            # Already processed: continue with its outcome right away.
            event = following
        self.env._active_proc = None


def _invalid_yield(generator: ProcessGenerator, value: Any) -> RuntimeError:
    frame = generator.gi_frame  # type: ignore
    filename, lineno = frame.f_code.co_filename, frame.f_lineno
    line = linecache.getline(filename, lineno).strip()
    error = RuntimeError(
        f'\n  File "{filename}", line {lineno}, in {frame.f_code.co_name}\n'
        f'    {line}\n'
        f'Invalid yield value "{value}"'
    )
    error.__cause__ = None
    return error
