import json
import logging
from fractions import Fraction

import pytest

import main
from core.codec import format_value
from core.curves import j_invariant, specialize

EXAMPLE_QUARTIC = ("4q^2,-4q(q+2)(2q+1),4q^4+20q^3+25q^2+20q+4,"
                   "-4q(q+2)(2q+1),4q^2")


@pytest.fixture
def run(tmp_path, capsys):
    """运行 main()，返回 (退出码, 标准输出, 标准错误)"""
    config = str(tmp_path / "missing.yaml")

    def _run(*argv):
        code = main.main([*argv, "--config", config])
        out, err = capsys.readouterr()
        return code, out, err

    yield _run
    root = logging.getLogger()
    for handler in main._installed_handlers:
        root.removeHandler(handler)
    main._installed_handlers.clear()


def _error(err):
    return json.loads(err.strip().splitlines()[-1])


def test_gen_power_family_123(run):
    code, out, _ = run("gen-power", "--triple", "123", "--a", "2", "--d", "1", "--t", "1")
    assert code == 0
    data = json.loads(out)
    assert data[0]['values'] == ["14/17", "3/17", "65/68", "3/68"]
    assert data[0]['spec'] == {'kind': 'power', 'n': 4, 'exponents': [1, 2, 3],
                               'targets': ["2", "13/8", "23/16"]}
    assert data[0]['provenance']['method'] == "family_123"


def test_gen_power_csv(run):
    code, out, _ = run("gen-power", "--triple", "24", "--d", "1", "--t", "0,1", "--csv")
    assert code == 0
    assert out.splitlines()[0] == "-2,1,-1"
    assert len(out.splitlines()) == 2


def test_gen_power_integerize(run):
    code, out, _ = run("gen-power", "--triple", "123", "--a", "2", "--d", "1", "--t", "1,2,3",
                       "--integerize")
    assert code == 0
    for item in json.loads(out):
        assert all("/" not in v for v in item['values'])


def test_gen_power_lift_and_positive(run):
    code, out, _ = run("gen-power", "--triple", "123", "--a", "2", "--d", "1", "--t", "1,2,5",
                       "--lift", "3,4", "--positive")
    assert code == 0
    data = json.loads(out)
    assert len(data) == 2
    assert all(len(item['values']) == 6 for item in data)


def test_divisible_by_needs_integerize(run):
    code, _, err = run("gen-power", "--triple", "123", "--a", "2", "--d", "1", "--t", "1",
                       "--divisible-by", "5")
    assert code == 2
    assert _error(err)['error'] == "usage_error"


def test_positivity_window(run):
    code, out, _ = run("gen-power", "--triple", "123", "--a", "2", "--d", "1", "--window")
    assert code == 0
    assert json.loads(out)['windows'] == [["0", "4/3"], ["4", "8"]]


def test_family_parameter_error(run):
    code, _, err = run("gen-power", "--triple", "m112", "--a", "2", "--b", "1/2", "--t", "1")
    assert code == 2
    assert _error(err)['error'] == "family_parameter_error"


def test_gen_sym_at_3(run):
    code, out, _ = run("gen-sym", "--i", "1", "--n", "3", "--t", "1", "--p", "2", "--q", "3",
                       "--count", "2")
    assert code == 0
    data = json.loads(out)
    assert len(data) == 2
    values = sorted(Fraction(v) for v in data[0]['values'])
    assert values == sorted([1, 1, Fraction(9, 80), Fraction(-45, 16), Fraction(80, 9),
                             Fraction(-16, 45)])
    assert data[0]['spec']['targets'] == ["47/6", "47/6", "1"]
    assert data[0]['provenance']['params']['j'] == 2


def test_gen_sym_reciprocal_base(run):
    code, out, _ = run("gen-sym", "--i", "2", "--n", "4", "--t", "2,3", "--p", "1/2", "--q", "5",
                       "--count", "2")
    assert code == 0
    data = json.loads(out)
    assert data
    assert all(len(item['values']) == 8 for item in data)


def test_gen_sym_count_limits(run):
    code, out, _ = run("gen-sym", "--i", "1", "--n", "3", "--t", "1", "--p", "2", "--q", "3",
                       "--count", "0")
    assert code == 0
    assert json.loads(out) == []

    code, _, err = run("gen-sym", "--i", "1", "--n", "3", "--t", "1", "--p", "2", "--q", "3",
                       "--count", "13")
    assert code == 2
    assert "chain.limit" in _error(err)['message']


def test_verify_round_trip(run, tmp_path):
    path = tmp_path / "solutions.json"
    code, _, _ = run("gen-power", "--triple", "124", "--a", "1", "--d", "1", "--t", "1,2",
                     "--output", str(path))
    assert code == 0

    code, out, _ = run("verify", "--file", str(path))
    assert code == 0
    assert json.loads(out)['passed']

    data = json.loads(path.read_text(encoding='utf-8'))
    data[1]['values'][0] = "7"
    path.write_text(json.dumps(data), encoding='utf-8')
    code, out, _ = run("verify", "--file", str(path))
    assert code == 1
    report = json.loads(out)
    assert not report['passed']
    assert report['reports'][0]['passed']
    assert not report['reports'][1]['passed']


def test_verify_ignores_stored_certificate(run, tmp_path):
    path = tmp_path / "solutions.json"
    run("gen-power", "--triple", "24", "--d", "1", "--t", "0", "--output", str(path))
    data = json.loads(path.read_text(encoding='utf-8'))
    data[0]['certificate'] = {'s_2': "999", 's_4': "999"}
    path.write_text(json.dumps(data), encoding='utf-8')
    code, out, _ = run("verify", "--file", str(path))
    assert code == 0


def test_verify_bad_input(run, tmp_path):
    code, _, err = run("verify", "--file", str(tmp_path / "absent.json"))
    assert code == 2
    assert _error(err)['error'] == "usage_error"

    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding='utf-8')
    code, _, err = run("verify", "--file", str(broken))
    assert code == 2
    assert _error(err)['error'] == "parse_error"


@pytest.mark.parametrize("content", [
    [1],
    [{"values": 5, "spec": {"kind": "power", "n": 3, "exponents": [2, 4], "targets": ["6", "18"]}}],
    [{"values": ["1", "1", "2"], "spec": "power"}],
    [{"values": ["1", "1", "2"], "spec": {"kind": "power", "n": 3, "exponents": [2, 4],
                                           "targets": ["6", "18"]}, "certificate": []}],
    "solutions",
])
def test_verify_wrong_shape(run, tmp_path, content):
    path = tmp_path / "shape.json"
    path.write_text(json.dumps(content), encoding='utf-8')
    code, _, err = run("verify", "--file", str(path))
    assert code == 2
    assert _error(err)['error'] == "parse_error"


@pytest.mark.slow
def test_identities_quartic_alias(run):
    code, out, _ = run("identities", "--only", "theorem45")
    assert code == 0
    data = json.loads(out)
    assert data['passed']
    assert {r['group'] for r in data['results']} == {'quartic'}


def test_identities_subset(run):
    code, out, _ = run("identities", "--only", "reduction,resultant", "--only", "singular_locus")
    assert code == 0
    data = json.loads(out)
    assert data['passed']
    assert {r['group'] for r in data['results']} == {'reduction', 'resultant', 'singular_locus'}


def test_identities_unknown_group(run):
    code, _, err = run("identities", "--only", "nonsense")
    assert code == 2
    assert _error(err)['error'] == "usage_error"


def test_curve_multiplication(run):
    code, out, _ = run("curve", "--A", "0", "--B", "1", "--point", "2,3", "--mul", "2",
                       "--certify")
    assert code == 0
    data = json.loads(out)
    assert data['result'] == {'X': "0", 'Y': "1"}
    assert data['certificate'] == {'verdict': 'finite_order', 'order': 6}
    assert data['j_invariant'] == "0"

    code, out, _ = run("curve", "--A", "0", "--B", "1", "--point", "2,3", "--mul", "0")
    assert json.loads(out)['result'] == "infinity"


def test_curve_errors(run):
    code, _, err = run("curve", "--A", "0", "--B", "0")
    assert code == 2
    assert _error(err)['error'] == "singular_curve"

    code, _, err = run("curve", "--A", "0", "--B", "1", "--specialize", "3")
    assert code == 2
    assert _error(err)['error'] == "usage_error"

    code, _, err = run("curve", "--A", "0", "--B", "1", "--point", "1,1")
    assert code == 2
    assert _error(err)['error'] == "not_on_curve"


def test_curve_quartic_specialized(run, reference_curve):
    code, out, _ = run("curve", "--quartic", EXAMPLE_QUARTIC, "--base", "0,2q", "--field", "q",
                       "--specialize", "3")
    assert code == 0
    data = json.loads(out)
    assert data['j_invariant'] == format_value(j_invariant(specialize(reference_curve, 3)))
    assert data['transform']['kind'] == "square"
    assert data['transform']['base'] == ["0", "6"]


def test_bad_arguments(run):
    code, _, err = run("gen-power", "--triple", "135", "--t", "1")
    assert code == 2
    assert _error(err)['error'] == "usage_error"
