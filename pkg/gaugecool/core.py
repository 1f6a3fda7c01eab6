"""
Core components of the Langevin-time scheduler.

.. autosummary::

    Environment
    Dynamics
    EmptySchedule
    StopSimulation
    Infinity

Time advances in whole integration steps ("ticks") of length *dt*. Whenever
the next scheduled event lies some ticks ahead, the environment hands these
ticks to its :class:`Dynamics` in a single :meth:`Dynamics.advance` call and
only then processes the event. Sampling and monitoring are written as
generator processes that yield timeouts (see :mod:`gaugecool.events`).

"""
from heapq import heappop, heappush
from itertools import count
from types import MethodType
from typing import (
    TYPE_CHECKING,
    Any,
    Generic,
    List,
    Optional,
    Protocol,
    Tuple,
    Type,
    TypeVar,
    Union,
)

from gaugecool.events import (
    NORMAL,
    URGENT,
    Event,
    EventPriority,
    Process,
    ProcessGenerator,
    Timeout,
    forward,
)

Infinity: float = float('inf')  #: Convenience alias for infinity

T = TypeVar('T')

TICK_TOLERANCE = 1e-6
"""Largest deviation (in steps) of a delay from a whole number of ticks."""


class BoundClass(Generic[T]):
    """Allows classes to behave like methods.

    The ``__get__()`` descriptor is basically identical to
    ``function.__get__()`` and binds the first argument of the ``cls`` to the
    descriptor instance.

    """

    def __init__(self, cls: Type[T]):
        self.cls = cls

    def __get__(
        self,
        instance: Optional['BoundClass'],
        owner: Optional[Type['BoundClass']] = None,
    ) -> Union[Type[T], MethodType]:
        if instance is None:
            return self.cls
        return MethodType(self.cls, instance)

    @staticmethod
    def bind_early(instance: object) -> None:
        """Bind all :class:`BoundClass` attributes of the *instance's* class
        to the instance itself to increase performance."""
        for name, obj in instance.__class__.__dict__.items():
            if type(obj) is BoundClass:
                bound_class = getattr(instance, name)
                setattr(instance, name, bound_class)


class EmptySchedule(Exception):
    """Thrown by an :class:`Environment` if there are no further events to be
    processed."""


class StopSimulation(Exception):
    """Indicates that the run should stop now."""

    @classmethod
    def callback(cls, event: Event) -> None:
        """Used as callback in :meth:`Environment.run()` to stop the run when
        the *until* event occurred."""
        if event.ok:
            raise cls(event.value)
        else:
            raise event._value


class Dynamics(Protocol):
    """Anything that can be integrated for a number of steps."""

    def advance(self, ticks: int) -> None:
        ...


class Environment:
    """Execution environment for a run in Langevin time.

    The passing of time is implemented by advancing the *dynamics* by whole
    steps of length *dt* between events. *initial_time* is the Langevin time
    of tick ``0``. Without dynamics the environment is a plain scheduler over
    a step grid, which is handy for tests.

    Exceptions raised by the dynamics (:exc:`~gaugecool.exceptions.Divergence`
    or :exc:`~gaugecool.exceptions.Escape`, typically) propagate out of
    :meth:`step` unchanged; the environment should not be resumed afterwards.

    """

    def __init__(
        self,
        dynamics: Optional[Dynamics] = None,
        dt: float = 1.0,
        initial_time: float = 0.0,
    ):
        if not dt > 0:
            raise ValueError(f'dt(={dt}) must be > 0.')
        self._dynamics = dynamics
        self._dt = float(dt)
        self._initial_time = float(initial_time)
        self._tick = 0
        self._queue: List[Tuple[int, EventPriority, int, Event]] = []
        self._eid = count()
        self._active_proc: Optional[Process] = None

        # Bind all BoundClass instances to "self" to improve performance.
        BoundClass.bind_early(self)

    @property
    def now(self) -> float:
        """The current Langevin time."""
        return self._initial_time + self._tick * self._dt

    @property
    def tick(self) -> int:
        """Number of steps handed to the dynamics so far."""
        return self._tick

    @property
    def dt(self) -> float:
        return self._dt

    @property
    def dynamics(self) -> Optional[Dynamics]:
        return self._dynamics

    @property
    def active_process(self) -> Optional[Process]:
        """The currently active process of the environment."""
        return self._active_proc

    if TYPE_CHECKING:
        # This block is only evaluated by mypy. The definitions below need to
        # be kept in sync with the BoundClass definitions further down.

        def process(self, generator: ProcessGenerator) -> Process:
            """Create a new :class:`~gaugecool.events.Process` instance for
            *generator*."""
            return Process(self, generator)

        def timeout(self, delay: float = 0, value: Optional[Any] = None
                    ) -> Timeout:
            """Return a new :class:`~gaugecool.events.Timeout` event with
            a *delay* in Langevin time and, optionally, a *value*."""
            return Timeout(self, delay, value)

        def event(self) -> Event:
            """Return a new :class:`~gaugecool.events.Event` instance.

            Yielding this event suspends a process until another process
            triggers the event.
            """
            return Event(self)

    else:
        process = BoundClass(Process)
        timeout = BoundClass(Timeout)
        event = BoundClass(Event)

    def ticks(self, delay: float) -> int:
        """Convert a *delay* in Langevin time into a number of steps.

        Raise :exc:`ValueError` if *delay* is negative or not a whole number
        of steps (within :data:`TICK_TOLERANCE`).

        """
        if delay < 0:
            raise ValueError(f'delay(={delay}) must be >= 0.')
        steps = delay / self._dt
        ticks = round(steps)
        if abs(steps - ticks) > TICK_TOLERANCE:
            raise ValueError(
                f'delay(={delay}) is not a multiple of dt(={self._dt}).'
            )
        return ticks

    def schedule(
        self,
        event: Event,
        priority: EventPriority = NORMAL,
        delay: int = 0,
    ) -> None:
        """Schedule an *event* with a given *priority* and a *delay* in
        ticks."""
        heappush(
            self._queue, (self._tick + delay, priority, next(self._eid), event)
        )

    def peek(self) -> float:
        """Get the time of the next scheduled event. Return
        :data:`~gaugecool.core.Infinity` if there is no further event."""
        try:
            return self._initial_time + self._queue[0][0] * self._dt
        except IndexError:
            return Infinity

    def step(self) -> None:
        """Advance the dynamics to the next event and process it.

        Raise an :exc:`EmptySchedule` if no further events are available.

        """
        try:
            tick = self._queue[0][0]
        except IndexError:
            raise EmptySchedule() from None

        if tick > self._tick and self._dynamics is not None:
            self._dynamics.advance(tick - self._tick)
        _, _, _, event = heappop(self._queue)
        self._tick = tick

        # None marks the event as processed before any callback runs.
        callbacks, event.callbacks = event.callbacks, None  # type: ignore
        for callback in callbacks:
            callback(event)

        if not event._ok and not hasattr(event, '_defused'):
            raise forward(event._value)

    def run(
        self, until: Optional[Union[float, Event]] = None
    ) -> Optional[Any]:
        """Executes :meth:`step()` until the given criterion *until* is met.

        - If it is ``None`` (which is the default), this method will return
          when there are no further events to be processed.

        - If it is an :class:`~gaugecool.events.Event`, the method will
          continue stepping until this event has been triggered and will
          return its value. Raise a :exc:`RuntimeError` if there are no
          further events to be processed and the *until* event was not
          triggered.

        - If it is a number, the method will continue stepping until the
          environment's time reaches *until*, which must lie a whole number
          of steps ahead.

        """
        if until is not None:
            if not isinstance(until, Event):
                # Assume that *until* is a number if it is not None and
                # not an event.
                at = float(until)

                if at <= self.now:
                    raise ValueError(
                        f'until(={at}) must be > the current time.'
                    )

                # Schedule the event before all regular timeouts.
                until = Event(self)
                until._ok = True
                until._value = None
                self.schedule(until, URGENT, self.ticks(at - self.now))

            elif until.callbacks is None:
                # Until event has already been processed.
                return until.value

            until.callbacks.append(StopSimulation.callback)

        try:
            while True:
                self.step()
        except StopSimulation as exc:
            return exc.args[0]  # == until.value
        except EmptySchedule:
            if until is not None:
                assert not until.triggered
                raise RuntimeError(
                    f'No scheduled events left but "until" event was not '
                    f'triggered: {until}'
                )
        return None
