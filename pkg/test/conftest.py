import pytest

import gmpy2
import mpmath

import gridramsey


@pytest.fixture(autouse=True, scope='function')
def _set_default_context():
    gridramsey.set_context(gridramsey.context())


def pytest_report_header(config):
    print("""
  gridramsey:                     {0}
  gmpy2:                          {1}
  Multiple-precision library:     {2}
  mpmath:                         {3}
""".format(gridramsey.version(),
           gmpy2.version(),
           gmpy2.mp_version(),
           mpmath.__version__))
