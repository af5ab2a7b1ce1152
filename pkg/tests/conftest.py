import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import effalg as ea

C3_DOC = """\
elements 0 a 1
zero 0
unit 1
sum 0 0 0
sum 0 a a
sum 0 1 1
sum a a 1
"""

B4_DOC = """\
elements 0 p q 1
zero 0
unit 1
sum 0 0 0
sum 0 p p
sum 0 q q
sum 0 1 1
sum p q 1
"""

HS_DOC = """\
elements 0 a b 1
zero 0
unit 1
sum 0 0 0
sum 0 a a
sum 0 b b
sum 0 1 1
sum a a 1
sum b b 1
"""

# valid six-element algebra whose order is not a lattice: a, b sit below the
# incomparable pair u, v, so {a, b} has no join and {u, v} has no meet
HEXAGON_DOC = """\
elements 0 a b u v 1
zero 0
unit 1
sum 0 0 0
sum 0 a a
sum 0 b b
sum 0 u u
sum 0 v v
sum 0 1 1
sum a a u
sum a b v
sum b b u
sum a u 1
sum b v 1
"""


@pytest.fixture(scope="session")
def c3():
    return ea.validate(ea.parse_eat(C3_DOC))


@pytest.fixture(scope="session")
def b4():
    return ea.validate(ea.parse_eat(B4_DOC))


@pytest.fixture(scope="session")
def hs():
    return ea.validate(ea.parse_eat(HS_DOC))


@pytest.fixture(scope="session")
def c5():
    return ea.chain(5)


@pytest.fixture(scope="session")
def p6():
    return ea.product(ea.chain(3), ea.chain(2))


@pytest.fixture(scope="session")
def mo2():
    return ea.mo(2)


@pytest.fixture(scope="session")
def hexagon():
    return ea.validate(ea.parse_eat(HEXAGON_DOC))


@pytest.fixture(scope="session")
def small_suite():
    """A fast cross-section of the standard population."""
    labels = (
        "chain:2", "chain:3", "chain:5", "chain:7",
        "boolean:2", "boolean:3", "mo:2", "mo:3",
        "product(chain:3,chain:2)", "product(chain:4,chain:3)",
        "product(boolean:2,chain:3)",
        "hsum(chain:3,chain:3)", "hsum(chain:4,chain:4)",
        "hsum(boolean:2,chain:3)", "hsum(chain:3,chain:3,chain:3)",
    )
    return [(label, ea.generate(label)) for label in labels]
