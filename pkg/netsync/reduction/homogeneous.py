"""Reduced admittances of homogeneous networks from their effective impedances."""
from netsync.config import DEFAULT_TOLERANCES
from netsync.errors import GuardViolated


def homogeneous_forward(y_series, y_shunt, n):
    """Effective impedances of the uniform complete graph y_shunt*I + y_series*(nI - 11^T).

    Args:
        y_series (complex): branch admittance
        y_shunt (complex): shunt admittance, None or 0 without shunts
        n (int): number of nodes

    Returns:
        tuple: (boundary-pair impedance, boundary-to-ground impedance or None)
    """
    if not y_shunt:
        return 2. / (n * y_series), None
    total = n * y_series + y_shunt
    return 2. / total, (y_shunt + y_series) / (y_shunt * total)


def homogeneous_params(z_eff_series, z_eff_shunt=None, n=2, tol=DEFAULT_TOLERANCES):
    """Inverts `homogeneous_forward`.

    Without shunts y_series = 2/(n z_es). With shunts, S = n*y_series + y_shunt
    equals 2/z_es and y_shunt = S/(n z_esh S - (n - 1)); the denominator
    vanishes exactly when z_es/z_esh = 2n/(n - 1).

    Args:
        z_eff_series (complex): effective impedance between two boundary nodes
        z_eff_shunt (complex): effective impedance from a boundary node to ground
        n (int): number of boundary nodes
        tol (Tolerances): tolerances, `structural_tol` sizes the guard

    Returns:
        tuple: (y_series, y_shunt or None)
    """
    if z_eff_series == 0:
        raise GuardViolated('effective series impedance is zero')
    if z_eff_shunt is None:
        return 2. / (n * z_eff_series), None
    if z_eff_shunt == 0:
        raise GuardViolated('effective shunt impedance is zero')

    total = 2. / z_eff_series
    lead = n * z_eff_shunt * total
    denom = lead - (n - 1)
    if abs(denom) <= tol.structural_tol * (abs(lead) + n - 1):
        raise GuardViolated(
            f'z_es/z_esh = {z_eff_series / z_eff_shunt:.6g} hits the degenerate ratio {2 * n / (n - 1):.6g}'
        )

    y_shunt = total / denom
    y_series = (total - y_shunt) / n
    return y_series, y_shunt
