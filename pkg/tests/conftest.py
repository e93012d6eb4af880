import warnings

import pytest

from unimon.params import QUBITS, DESIGN


@pytest.fixture(scope="session")
def design():
    return DESIGN


@pytest.fixture(scope="session")
def qubit_b():
    return QUBITS["B"]


@pytest.fixture(autouse=True)
def _quiet_regime_warnings():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", category=UserWarning)
        yield
