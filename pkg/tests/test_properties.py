import math

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

import props

# random draws may put wavefunctions near the grid edge; the algebra still holds
pytestmark = pytest.mark.filterwarnings("ignore::cqedgate.spectrum.BasisWarning")

fin = dict(allow_nan=False, allow_infinity=False)
CIRCUIT = st.builds(props.circuit, st.floats(0.5, 2.0), st.floats(1.0, 8.0),
                    st.floats(2.2, 5.0), st.floats(1.5, 3.0), st.floats(200.0, 600.0),
                    st.floats(0.0, 0.25))
FLUX = st.floats(-2 * math.pi, 2 * math.pi, exclude_max=True, **fin)
SET = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@SET
@given(st.floats(0.1, 10.0), st.floats(1e-3, 5.0), st.floats(-1.0, 1.0))
def test_canonical_transform(omega, delta, g1):
    props.canonical(omega, delta, g1)


@SET
@given(CIRCUIT, FLUX, FLUX)
def test_hamiltonian_hermitian(p, x, y):
    props.hermitian(p, props.FluxBias(x, y))


@SET
@given(CIRCUIT, FLUX, FLUX)
def test_states_normalized(p, x, y):
    props.normalized(p, props.FluxBias(x, y))


@SET
@given(st.lists(st.complex_numbers(max_magnitude=1.0, **fin), min_size=10, max_size=10)
       .filter(lambda v: np.linalg.norm(v) > 1e-3),
       st.lists(st.tuples(st.integers(0, 1), st.integers(0, 2), st.integers(0, 2)),
                max_size=8))
def test_register_norm(amps, ops):
    props.register_norm(np.array(amps), ops)


@SET
@given(CIRCUIT, FLUX, FLUX)
def test_flux_periodicity(p, x, y):
    props.periodic(p, x, y)


@SET
@given(CIRCUIT, FLUX, FLUX)
def test_chi_to_zero_decouples(p, x, y):
    props.decoupled(p, props.FluxBias(x, y))
