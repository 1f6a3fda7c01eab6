"""
Inner loops of the reduced SDE.

Plain functions on floats only, so that ``setup.py`` can compile this module
with Cython; the interpreted module is used when no compiled one is built.

With ``s = x + i y`` the drift ``2 (cot s - beta sin s)`` is evaluated
through ``cosh 2y - cos 2x = 2 (sinh(y)**2 + sin(x)**2)``, which stays
accurate near the singular points ``s = k pi``.

"""
import math

TWO_PI = 2.0 * math.pi

SINGULAR_RADIUS = 1e-12
"""Distance from a singular point ``s = k pi`` below which the drift is
treated as singular."""
SINGULAR_Q = SINGULAR_RADIUS * SINGULAR_RADIUS


def drift(x, y, a, b):
    """Return ``(K_R, K_I)`` at ``(x, y)`` for ``beta = a + i b``.

    Raise :exc:`ZeroDivisionError` within :data:`SINGULAR_RADIUS` of
    ``s = k pi``.

    """
    sin_x = math.sin(x)
    cos_x = math.cos(x)
    sinh_y = math.sinh(y)
    cosh_y = math.cosh(y)
    q = sinh_y * sinh_y + sin_x * sin_x
    if q < SINGULAR_Q:
        raise ZeroDivisionError(f'drift is singular at ({x}, {y}).')
    kr = 2.0 * (-a * cosh_y * sin_x + b * sinh_y * cos_x + sin_x * cos_x / q)
    ki = -2.0 * (a * sinh_y * cos_x + b * cosh_y * sin_x + sinh_y * cosh_y / q)
    return kr, ki


def integrate(x, y, a, b, dt, noise, cap, y_bound):
    """Advance ``(x, y)`` by one Euler-Maruyama step per entry of *noise*.

    The drift displacement is clipped to length *cap*; steps within
    :data:`SINGULAR_RADIUS` of a singular point move by noise only. Both
    count as capped. Integration stops early once ``|y| > y_bound``.

    Return ``(x, y, steps, capped, max_abs_y, escaped)``.

    """
    scale = math.sqrt(2.0 * dt)
    capped = 0
    steps = 0
    max_abs_y = abs(y)
    for eta in noise:
        sin_x = math.sin(x)
        cos_x = math.cos(x)
        sinh_y = math.sinh(y)
        cosh_y = math.cosh(y)
        q = sinh_y * sinh_y + sin_x * sin_x
        if q >= SINGULAR_Q:
            dx = 2.0 * dt * (
                -a * cosh_y * sin_x + b * sinh_y * cos_x + sin_x * cos_x / q
            )
            dy = -2.0 * dt * (
                a * sinh_y * cos_x + b * cosh_y * sin_x + sinh_y * cosh_y / q
            )
            length = math.sqrt(dx * dx + dy * dy)
            if length > cap:
                dx *= cap / length
                dy *= cap / length
                capped += 1
        else:
            dx = 0.0
            dy = 0.0
            capped += 1

        x += dx + scale * eta
        y += dy
        if x > math.pi or x <= -math.pi:
            x = math.remainder(x, TWO_PI)
            if x == -math.pi:
                x = math.pi
        steps += 1

        abs_y = abs(y)
        if abs_y > max_abs_y:
            max_abs_y = abs_y
            if abs_y > y_bound:
                return x, y, steps, capped, max_abs_y, True
    return x, y, steps, capped, max_abs_y, False
