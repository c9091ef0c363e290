import pytest

from hexweave import artifact as A
from hexweave.lattice import ALL_STATES, TileState

DIGEST = "sha256:c431623c956c70a7b8471ba693be4b4fd25be5c0e3b230dbad78a01f7b66d416"


def test_default_digest_frozen(art):
    assert art.digest == DIGEST
    assert art.compute_digest() == DIGEST


def test_roundtrip(art):
    again = A.loads(art.dumps())
    assert again.dumps() == art.dumps()
    assert again.compose == art.compose and again.hexmap == art.hexmap


def test_shipped_file_contents(art):
    assert art.base.edge_bits == (0, 1, 0, 1, 1, 0)
    assert art.centers == {1: TileState(0, "L"), 2: TileState(2, "R")}
    assert set(art.compose.values()) == set(ALL_STATES)
    assert len(art.hexmap) == 14


def test_digest_mismatch_rejected(art):
    text = art.dumps().replace("center s2 2R", "center s2 3R")
    with pytest.raises(A.ArtifactError, match="digest mismatch"):
        A.loads(text)


def test_bad_header():
    with pytest.raises(A.ArtifactError):
        A.loads("nope\n")


def test_invalid_decoration_rejected(art):
    lines = [ln for ln in art.dumps().splitlines() if not ln.startswith("digest")]
    lines = [("colors R R R R R R" if ln.startswith("colors") else ln) for ln in lines]
    with pytest.raises(A.ArtifactError, match="invalid base decoration"):
        A.loads("\n".join(lines))


def test_non_bijective_compose_rejected(art):
    lines = [ln for ln in art.dumps().splitlines() if not ln.startswith("digest")]
    lines = [("compose 1 0 0 0L" if ln.startswith("compose 1 0 0") else ln) for ln in lines]
    with pytest.raises(A.ArtifactError):
        A.loads("\n".join(lines))


def test_env_override(tmp_path, monkeypatch, art):
    body = [ln for ln in art.dumps().splitlines() if not ln.startswith(("digest", "center s2"))]
    path = tmp_path / "alt.dec"
    path.write_text("\n".join(body) + "\n")
    monkeypatch.setenv("HEXWEAVE_DEC", str(path))
    alt = A.default_artifact()
    assert alt.digest != DIGEST and 2 not in alt.centers
    monkeypatch.setenv("HEXWEAVE_DEC", str(tmp_path / "missing.dec"))
    with pytest.raises(A.ArtifactError, match="cannot read"):
        A.default_artifact()


def test_missing_hexmap_entry(art):
    sub = A.Artifact(art.base, art.compose, art.centers, {})
    with pytest.raises(A.ArtifactError):
        sub.hex_state("A", False)
