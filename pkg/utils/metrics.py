import numpy as np


def summarize_fidelities(fidelities, tol=1e-9):
    """
    Summary statistics for a batch of fidelities.

    Args:
        fidelities: iterable of values in [0, 1]
        tol: a run passes when fidelity >= 1 - tol

    Returns:
        dict with count, min, mean, max, failures
    """
    values = np.asarray(list(fidelities), dtype=float)
    if values.size == 0:
        return {'count': 0, 'min': 1.0, 'mean': 1.0, 'max': 1.0, 'failures': 0}
    return {
        'count': int(values.size),
        'min': float(values.min()),
        'mean': float(values.mean()),
        'max': float(values.max()),
        'failures': int(np.sum(values < 1.0 - tol)),
    }


def born_probabilities(state):
    """Computational-basis distribution keyed by bitstring, row 0 first."""
    probs = state.probabilities()
    width = state.n_qubits
    return {format(i, f"0{width}b"): float(p) for i, p in enumerate(probs)}


def binomial_sigma(shots, p):
    return float(np.sqrt(shots * p * (1 - p)))


def max_binomial_deviation(counts, probabilities, shots):
    """Largest |observed - expected| over outcomes, in binomial sigmas."""
    worst = 0.0
    for key, p in probabilities.items():
        observed = counts.get(key, 0)
        sigma = binomial_sigma(shots, p)
        if sigma == 0:
            if observed != round(shots * p):
                return float('inf')
            continue
        worst = max(worst, abs(observed - shots * p) / sigma)
    unexpected = [k for k in counts if k not in probabilities]
    if unexpected:
        return float('inf')
    return worst


def total_variation_distance(counts, probabilities):
    """Half the L1 distance between observed frequencies and probabilities."""
    shots = sum(counts.values())
    if shots == 0:
        return 0.0
    keys = set(counts) | set(probabilities)
    return 0.5 * sum(abs(counts.get(k, 0) / shots - probabilities.get(k, 0.0)) for k in keys)
