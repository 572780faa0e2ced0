import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from circlab.errors import InstanceFormatError
from circlab.geometry import Circle3, IncidenceInstance, Point3
from circlab.io import dumps_instance, loads_instance

from conftest import triples


@given(st.lists(triples(), max_size=6))
def test_round_trip(points):
    inst = IncidenceInstance([Point3.of(p) for p in points], [Circle3.from_center((mpq(1, 3), 0, 2), (1, 2, 3), mpq(5, 7))])
    back = loads_instance(dumps_instance(inst))
    assert back.points == inst.points and back.circles == inst.circles and back.q == inst.q


@pytest.mark.parametrize(
    "text, field",
    [
        ("{", "$"),
        ("[]", "$"),
        ('{"circles": []}', "points"),
        ('{"points": [[1, 2]], "circles": []}', "points[0]"),
        ('{"points": [[1, 2, 0.5]], "circles": []}', "points[0][2]"),
        ('{"points": [], "circles": [{"n": [0, 0, 1], "d": 0, "c": [0, 0, 0]}]}', "circles[0].r2"),
        ('{"points": [], "circles": [{"n": [0, 0, 1], "d": 0, "c": [0, 0, 0], "r2": "x"}]}', "circles[0].r2"),
    ],
)
def test_errors_name_the_field(text, field):
    with pytest.raises(InstanceFormatError) as err:
        loads_instance(text)
    assert err.value.field == field


def test_rational_strings():
    inst = loads_instance('{"points": [["1/2", -3, "4/6"]], "circles": []}')
    assert inst.points[0] == Point3(mpq(1, 2), -3, mpq(2, 3))
