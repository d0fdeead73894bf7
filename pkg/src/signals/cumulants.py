import numpy as np
from scipy.special import logsumexp

from src.core.exceptions import EmptyWindow, InvalidParameter
from src.signals.models import CgfEstimate, Window


def empirical_cgf(signal, window=None, z_values=()):
    """Empirical cumulant-generating function ``log <exp(z s)>`` over ``window``.

    The mean of exponentials is evaluated as a log-sum-exp with the largest
    exponent factored out; ``K(0)`` is exactly zero.
    """
    signal = np.asarray(signal, dtype=np.float64).reshape(-1)
    window = window or Window.full(signal.size)
    samples = signal[window.slice]
    if samples.size == 0:
        raise EmptyWindow(f"window [{window.start}, {window.stop}) holds no samples")

    z_values = np.asarray(z_values, dtype=np.float64).reshape(-1)
    if not np.all(np.isfinite(z_values)):
        raise InvalidParameter("z values must be finite")

    exponents = z_values[:, np.newaxis] * samples[np.newaxis, :]
    k_values = logsumexp(exponents, axis=1) - np.log(samples.size)
    k_values[z_values == 0] = 0.0
    return CgfEstimate(z_values=z_values, k_values=k_values)
