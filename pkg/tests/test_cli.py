import io

import pytest

from tollbooth.cli import main
from tollbooth.gadgets import PartitionInput, known_partition_tolls
from tollbooth.instance import format_tolls

PIGOU = """\
network 2 2 s t
edge 0 s t 1 0
edge 1 s t 0 1
demand 1
flow 0 1/2
flow 1 1/2
"""


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return _write


def test_solve_pigou(write):
    code, out, err = run("solve", write("pigou.txt", PIGOU))
    assert code == 0
    assert out == "toll 0 1/2\nsupport 1\ninduced-length 1\n"
    assert "# verdict opt-inducing: true" in err


def test_solve_trace(write):
    code, out, _ = run("solve", "--trace", write("pigou.txt", PIGOU))
    assert code == 0 and out.splitlines()[-1] == "list 0 (1:1) (2:inf)"


def test_solve_computes_optimum(write):
    text = "\n".join(l for l in PIGOU.splitlines() if not l.startswith("flow")) + "\n"
    path = write("bare.txt", text)
    assert run("solve", path)[0] == 4
    code, out, _ = run("solve", "--compute-optimum", path)
    assert code == 0 and out.startswith("toll 0 1/2")


def test_induce_below_longest_path(write):
    code, _, err = run("solve", "--induce", "1/2", write("pigou.txt", PIGOU))
    assert code == 4 and "LengthTooSmall" in err
    code, out, _ = run("solve", "--induce", "3", write("pigou2.txt", PIGOU))
    assert code == 0 and "induced-length 3" in out


def test_parse_error(write):
    assert run("solve", write("bad.txt", "network 2 1 s t\nedge 0 s t 0.5 1\n"))[0] == 2
    assert run("solve", "/nonexistent/file")[0] == 2


def test_gadget_not_series_parallel(write):
    code, gadget, _ = run("gen", "partition", "--set", "1,1")
    assert code == 0
    code, _, err = run("solve", write("p.txt", gadget))
    assert code == 3 and "series-parallel" in err


def test_verify_known_partition_tolls(write):
    _, gadget, _ = run("gen", "partition", "--set", "1,1")
    inst = write("p.txt", gadget)
    p = PartitionInput((1, 1))
    tolls = write("t.txt", "\n".join(format_tolls(known_partition_tolls(p, {1}, {2}))) + "\n")
    code, out, _ = run("verify", inst, "--tolls", tolls)
    assert code == 0 and out.endswith("verdict true\n")
    empty = write("e.txt", "support 0\n")
    code, out, _ = run("verify", inst, "--tolls", empty)
    assert code == 1 and "verdict false" in out


def test_verify_optimality(write):
    code, out, _ = run("verify", write("pigou.txt", PIGOU))
    assert (code, out) == (0, "optimal true\nverdict true\n")
    bad = PIGOU.replace("flow 0 1/2\nflow 1 1/2\n", "flow 0 1\n")
    assert run("verify", write("bad.txt", bad))[0] == 1


def test_oracle_vc_p2(write):
    graph = write("p2.txt", "vertices 2\n1 2\n")
    code, gadget, _ = run("gen", "vc", "--graph", graph)
    assert code == 0
    code, out, _ = run("oracle", write("vc.txt", gadget))
    assert code == 0 and "support 3" in out.splitlines()


def test_oracle_support_bound_and_guard(write):
    _, gadget, _ = run("gen", "partition", "--set", "1,1")
    path = write("p.txt", gadget)
    code, out, _ = run("oracle", path, "--max-support", "3")
    assert code == 1 and out.startswith("infeasible")
    assert run("oracle", path, "--max-checks", "5")[0] == 6


def test_random_pipeline_closed_loop(write):
    code, inst, _ = run("gen", "random", "--seed", "1", "--edges", "50")
    assert code == 0
    path = write("r.txt", inst)
    code, tolls, _ = run("solve", path)
    assert code == 0
    code, out, _ = run("verify", path, "--tolls", write("t.txt", tolls))
    assert code == 0 and "verdict true" in out


def test_deterministic_output(write):
    _, inst, _ = run("gen", "random", "--seed", "7", "--edges", "40")
    assert inst == run("gen", "random", "--seed", "7", "--edges", "40")[1]
    path = write("r.txt", inst)
    first = run("solve", "--trace", path)[1]
    assert first == run("solve", "--trace", path)[1]


def test_optflow(write):
    code, out, _ = run("optflow", write("pigou.txt", PIGOU))
    assert out == "flow 0 1/2\nflow 1 1/2\ndemand 1\nsocial-cost 3/4\n"
    code, out, _ = run("optflow", "--equilibrium", write("pigou.txt", PIGOU))
    assert out.startswith("flow 0 1\n")


def test_usage_error():
    with pytest.raises(SystemExit) as info:
        main(["solve"], stdout=io.StringIO(), stderr=io.StringIO())
    assert info.value.code == 2
