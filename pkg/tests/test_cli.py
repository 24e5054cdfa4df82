import io
import json
from pathlib import Path

import jsonschema
import pytest

from spanstruct.cli import run
from spanstruct.generators import generate
from spanstruct.group import GroupSpec, GSet
from spanstruct.reports import load_schema
from spanstruct.setfile import SetFileError, parse_set_file, serialize_set

CORPUS = Path(__file__).resolve().parent.parent / "corpus"
SCHEMA = load_schema()


def cli(*argv):
    out = io.StringIO()
    code = run([str(a) for a in argv], stdout=out)
    text = out.getvalue()
    return code, text


def cli_json(*argv):
    code, text = cli(*argv)
    assert code == 0, text
    report = json.loads(text)
    jsonschema.validate(report, SCHEMA)
    return report["result"]


def write(tmp_path, text, name="a.set"):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_parse_examples():
    assert parse_set_file("group Z\n0\n1\n3\n") == GSet.of([0, 1, 3])
    A = parse_set_file("group Z_5\n7\n")
    assert A.spec == GroupSpec.cyclic(5) and A.to_list() == [2]
    assert len(parse_set_file("group Z_4 x Z_4\n1,2\n3,3\n")) == 2
    B = parse_set_file("# header comment\r\ngroup Z^2\r\n1,2  # trailing\r\n\r\n-3,4\r\n")
    assert B.to_list() == [[-3, 4], [1, 2]]


@pytest.mark.parametrize(
    "text, line",
    [("0\n", 1), ("group Q\n", 1), ("group Z\n1\nx\n", 3), ("group Z_4 x Z_4\n1\n", 2), ("group Z_5\n1\n6\n", 3)],
)
def test_parse_errors_name_the_line(text, line):
    with pytest.raises(SetFileError) as exc:
        parse_set_file(text)
    assert exc.value.line == line


def test_dedupe_flag():
    assert parse_set_file("group Z_5\n1\n6\n", dedupe=True).to_list() == [1]
    with pytest.raises(SetFileError):
        parse_set_file("")


def test_generator_examples():
    assert generate("ap", [4, 1, 0]).to_list() == [0, 1, 2, 3]
    assert generate("geo", [5]).to_list() == [1, 2, 4, 8, 16]
    assert generate("sidon_greedy", [4]).to_list() == [0, 1, 3, 7]
    box = generate("box_random", [10, 5, 2], seed=9)
    assert len(box) == 10 and box.spec == GroupSpec.integers(2)
    assert box == generate("box_random", [10, 5, 2], seed=9)
    cos = generate("subgroup_union", [5, 2, 3], seed=1)
    assert len(cos) == 12 and cos.spec == GroupSpec.cyclic(2, 2, 2, 2, 2)
    with pytest.raises(ValueError):
        generate("box_random", [30, 5, 2])


def _brute_sidon(n):
    # least-first search over candidate sets: the next element is the least x keeping sums distinct
    elems = [0]
    x = 0
    while len(elems) < n:
        x += 1
        sums = [a + b for i, a in enumerate(elems + [x]) for b in (elems + [x])[i:]]
        if len(sums) == len(set(sums)):
            elems.append(x)
    return elems


def test_sidon_against_pair_sum_oracle():
    assert generate("sidon_greedy", [12]).to_list() == _brute_sidon(12)


def test_round_trip_corpus():
    for path in sorted(CORPUS.glob("*.set")):
        A = parse_set_file(path.read_text())
        assert parse_set_file(serialize_set(A)) == A
    for kind, params in [("ap", [7, 3, -2]), ("geo", [6]), ("box_random", [15, 6, 3]), ("subgroup_union", [4, 1, 2])]:
        A = generate(kind, params, seed=3)
        assert parse_set_file(serialize_set(A)) == A


def test_energy_subcommand(tmp_path):
    res = cli_json("energy", write(tmp_path, "group Z\n0\n1\n3\n"))
    assert res["energy"] == 15 and res["c"] == {"num": 5, "den": 9}


def test_thm2_subcommand():
    res = cli_json("thm2", CORPUS / "interval16.set")
    assert res["K"] == {"num": 31, "den": 16}
    assert res["span_basis_size"] == 5 and res["covered"] is True


def test_dissociate_subcommand(tmp_path):
    res = cli_json("dissociate", write(tmp_path, "group Z\n1\n2\n3\n"))
    assert res["verdict"] == "NOT" and res["witness"] == [1, 1, -1]
    res = cli_json("dissociate", CORPUS / "interval64.set")
    assert res["verdict"] == "NOT" and res["witness_rule"] == "first-greedy-rejection"
    A = GSet.of(range(1, 65))
    total = sum(s * a for s, a in zip(res["witness"], A.to_list()))
    assert total == 0 and any(res["witness"])


def test_span_subcommand(tmp_path):
    res = cli_json("span", write(tmp_path, "group Z\n1\n2\n3\n"), "--contains", "3")
    assert res["basis"]["elements"] == [1, 2] and res["covers_input"]
    assert res["contains"]["witness"] == [1, 1]


def test_peel_and_fourier_subcommands():
    res = cli_json("peel", CORPUS / "interval16.set", "--l", "5")
    assert res["layers"][0]["elements"] == [1, 2, 4, 8, 16]
    assert all(e["holds"] for e in res["errors"])
    res = cli_json("fourier-check", CORPUS / "geo8.set", "--rudin-trials", "20")
    assert res["energy_exact"] == round(res["energy_via_l4"])
    assert all(c["holds"] for c in res["checks"])
    assert res["rudin"]["trials"] == 20


def test_thm1_exit_codes(tmp_path):
    res = cli_json("thm1", CORPUS / "interval16.set", "--require-cert")
    assert res["certified"]
    path = write(tmp_path, "group Z\n0\n3\n1000000\n")
    code, _ = cli("thm1", path, "--require-cert", "--max-group", "1024")
    assert code == 2
    code, _ = cli("thm1", path, "--max-group", "1024")
    assert code == 0
    res = cli_json("thm1", CORPUS / "interval16.set", "--c", "1/2", "--no-adaptive", "--l", "2")
    assert res["c_used"] == {"num": 1, "den": 2} and res["l_trajectory"] == [2]


def test_error_exit_codes(tmp_path, capsys):
    assert cli("frobnicate")[0] == 64
    assert cli("energy")[0] == 64
    assert cli("energy", tmp_path / "missing.set")[0] == 1
    assert cli("energy", write(tmp_path, "group Z\n1\n1\n"))[0] == 1
    assert cli("energy", write(tmp_path, "group Z\n1\n1\n"), "--dedupe")[0] == 0
    assert cli("dissociate", write(tmp_path, "group Z\n" + "\n".join(str(i) for i in range(1, 40)) + "\n"), "--strategy", "brute")[0] == 0
    assert cli("thm1", write(tmp_path, "group Z\n5\n"))[0] == 1


def test_gen_outputs(tmp_path):
    code, text = cli("gen", "geo", 5, "--format", "text")
    assert code == 0 and text == "group Z\n1\n2\n4\n8\n16\n"
    out = tmp_path / "g.set"
    res = cli_json("gen", "sidon_greedy", 4, "--output", out)
    assert res["set"]["elements"] == [0, 1, 3, 7]
    assert out.read_text() == res["setfile"]
    assert cli("gen", "box_random", 50, 3, 2)[0] == 1


def test_text_format():
    code, text = cli("energy", CORPUS / "z5_013.set", "--format", "text")
    assert code == 0 and "energy:" in text and "c: " in text
