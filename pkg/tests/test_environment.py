"""
General tests for the `gaugecool.core.Environment`.

"""
# Pytest gets the parameters "env" and "log" from the *conftest.py* file
import pytest

from gaugecool.core import EmptySchedule, Environment, Infinity
from gaugecool.exceptions import Divergence


class Counter:
    """Dynamics that only records how it is advanced."""

    def __init__(self, fail_at=None):
        self.calls = []
        self.fail_at = fail_at

    @property
    def total(self):
        return sum(self.calls)

    def advance(self, ticks):
        if self.fail_at is not None and self.total + ticks >= self.fail_at:
            raise Divergence(self.fail_at, 'counter')
        self.calls.append(ticks)


def test_event_queue_empty(env, log):
    """The run should stop if there are no more events, that means, no
    more active process."""
    def pem(env, log):
        while env.now < 2:
            log.append(env.now)
            yield env.timeout(1)

    env.process(pem(env, log))
    env.run(10)

    assert log == [0, 1]


def test_run_negative_until(env):
    """Test passing a negative time to run."""
    pytest.raises(ValueError, env.run, -3)


def test_run_resume(env):
    """A stopped run can be resumed."""
    events = [env.timeout(t) for t in (5, 10, 15)]

    assert env.now == 0
    assert not any(event.processed for event in events)

    env.run(until=10)
    assert env.now == 10
    assert all(event.processed for event in events[:1])
    assert not any(event.processed for event in events[1:])

    env.run(until=15)
    assert env.now == 15
    assert all(event.processed for event in events[:2])
    assert not any(event.processed for event in events[2:])

    env.run()
    assert env.now == 15
    assert all(event.processed for event in events)


def test_run_until_value():
    """Anything that can be converted to a float is a valid until value."""
    env = Environment(dt=0.25)
    env.run(until='3.75')
    assert env.now == 3.75
    assert env.tick == 15


def test_run_until_off_grid():
    env = Environment(dt=0.25)
    with pytest.raises(ValueError, match='not a multiple of dt'):
        env.run(until=1.1)


def test_run_with_processed_event(env):
    """An already processed event may also be passed as until value."""
    timeout = env.timeout(1, value='spam')
    assert env.run(until=timeout) == 'spam'
    assert env.now == 1

    # timeout has been processed, calling run again will return its value
    # again.
    assert env.run(until=timeout) == 'spam'
    assert env.now == 1


def test_run_with_untriggered_event(env):
    excinfo = pytest.raises(RuntimeError, env.run, until=env.event())
    assert str(excinfo.value).startswith('No scheduled events left but "until"'
                                         ' event was not triggered:')


def test_invalid_dt():
    with pytest.raises(ValueError, match='dt'):
        Environment(dt=0)


def test_initial_time():
    env = Environment(dt=0.5, initial_time=2.0)
    env.timeout(1.5)
    assert env.peek() == 3.5
    env.run()
    assert env.now == 3.5


def test_ticks():
    env = Environment(dt=2e-5)
    assert env.ticks(0.5) == 25000
    assert env.ticks(2e-3) == 100
    assert env.ticks(0) == 0
    with pytest.raises(ValueError, match='must be >= 0'):
        env.ticks(-2e-5)
    with pytest.raises(ValueError, match='not a multiple'):
        env.ticks(3e-5)


def test_peek_and_step(env):
    assert env.peek() == Infinity
    pytest.raises(EmptySchedule, env.step)
    env.timeout(3)
    assert env.peek() == 3


def test_dynamics_advanced_between_events(log):
    """The dynamics receive the ticks between events in single calls."""
    dynamics = Counter()
    env = Environment(dynamics, dt=0.1)

    def pem(env):
        yield env.timeout(0.5)
        log.append(env.tick)
        for _ in range(3):
            yield env.timeout(0.2)
            log.append(env.tick)

    env.process(pem(env))
    env.run()

    assert log == [5, 7, 9, 11]
    assert dynamics.calls == [5, 2, 2, 2]
    assert env.now == pytest.approx(1.1)


def test_dynamics_not_advanced_for_simultaneous_events():
    dynamics = Counter()
    env = Environment(dynamics)
    env.timeout(2)
    env.timeout(2)
    env.timeout(0)
    env.run()
    assert dynamics.calls == [2]


def test_dynamics_advanced_to_until():
    dynamics = Counter()
    env = Environment(dynamics, dt=0.5)
    env.run(until=3)
    assert dynamics.calls == [6]


def test_dynamics_exception_propagates(log):
    """Excursions of the dynamics stop the run unchanged."""
    dynamics = Counter(fail_at=4)
    env = Environment(dynamics)

    def pem(env):
        while True:
            yield env.timeout(3)
            log.append(env.now)

    env.process(pem(env))
    with pytest.raises(Divergence) as excinfo:
        env.run(until=10)
    assert excinfo.value.time == 4
    assert log == [3]
    assert env.now == 3
