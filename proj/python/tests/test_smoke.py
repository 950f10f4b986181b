import os

import pytest

import padicl


def job(name):
    return os.path.join(padicl.config_dir(), "jobs", name + ".json")


def test_sha256_vector():
    assert padicl.sha256("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"


def test_field_validate():
    r = padicl.field_validate(os.path.join(padicl.config_dir(), "fields", "Qi.json"))
    assert r["valid"]
    assert r["degree"] == 2


def test_symbol_build(tmp_path):
    r = padicl.symbol_build(job("level55_k0"), out=str(tmp_path))
    assert r["level"] == 55
    assert (tmp_path / "symbol.json").exists()


def test_lfun_deterministic(tmp_path):
    a = padicl.lfun_compute(job("level55_k0"), out=str(tmp_path / "a"))
    b = padicl.lfun_compute(job("level55_k0"), out=str(tmp_path / "b"))
    assert a["content_hash"] == b["content_hash"]
    e = padicl.lfun_eval(job("level55_k0"), out=str(tmp_path / "a"))
    assert all("value" in x for x in e["evaluations"])


def test_verify_gauss(tmp_path):
    assert "gauss" in padicl.suite_names()
    assert padicl.verify("gauss", out=str(tmp_path))["pass"]


def test_error_code():
    with pytest.raises(padicl.PadiclError) as info:
        padicl.symbol_build("/nonexistent/job.json")
    assert info.value.args[0] == "E_IO"
