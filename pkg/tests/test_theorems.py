import pytest

from fbcat.corpus import enumerate_basic_subcategories, get_instance, random_module
from fbcat.fincat import hom_dim
from fbcat.theorems import (
    REPORT_SCHEMA,
    classify,
    faithfully_balanced,
    phi_hom_matrix,
    psi_hom_matrix,
    sweep_subcategories,
    tilde_category,
    verify_cogen1_duality,
    verify_extyon,
    verify_iso_on_ext,
    verify_nice_special_case,
    verify_symmetry,
)


@pytest.mark.parametrize("name", ["truncpoly:1", "truncpoly:3", "a_n:2", "a_n:3", "semisimple:2"])
def test_regular_and_gencogen_are_faithfully_balanced(name):
    inst = get_instance(name)
    for names in (inst.regular(), inst.generator_cogenerator()):
        rep = faithfully_balanced(inst.add_of(names))
        assert rep.ok and rep.verdict is True


def test_simple_over_k_times_k_is_not_faithfully_balanced():
    inst = get_instance("semisimple:2")
    rep = faithfully_balanced(inst.add_of(["S1"]))
    assert rep.ok and rep.verdict is False
    assert rep.witness["object"] == "2"


def test_symmetry_for_generator_cogenerator():
    inst = get_instance("a_n:3")
    madd = inst.add_of(inst.generator_cogenerator())
    for k in (1, 2, 3):
        rep = verify_symmetry(madd, k)
        assert rep.ok and rep.details["side1"] and rep.details["side2"]
        assert rep.details["criterion"]["holds"]


def test_symmetry_for_non_faithful_subcategory():
    inst = get_instance("semisimple:2")
    rep = verify_symmetry(inst.add_of(["S1"]), 1)
    assert rep.ok and not rep.details["side1"] and not rep.details["side2"]


def test_symmetry_on_a2_p1_shares_one_verdict():
    inst = get_instance("a_n:2")
    madd = inst.add_of(["P1"])
    for k in (1, 2):
        sym, nice = verify_symmetry(madd, k), verify_nice_special_case(madd, k)
        assert sym.ok and nice.ok and sym.verdict == nice.verdict
        assert all(w["automatic"] for w in nice.details["mod_k_witnesses"].values())


def test_extyon_over_dual_numbers():
    inst = get_instance("truncpoly:2")
    madd = inst.add_of(["P"])
    mods = inst.indecomposable_reps()
    rep = verify_extyon(madd, [(Z, C) for Z in mods for C in mods])
    assert rep.ok and len(rep.details["checked"]) == 4


def test_extyon_trivial_cases():
    inst = get_instance("a_n:3")
    madd = inst.add_of(["[1,1]", "[2,3]"])
    M = inst.module("[2,3]")
    st = psi_hom_matrix(madd, M, M)
    assert st.shape == (1, 1)
    Z, C = inst.module("[1,1]"), inst.module("[2,2]")
    assert hom_dim(Z, C) == 0 and phi_hom_matrix(madd, Z, C).shape[1] == 0


def test_extyon_reports_precondition_failures():
    inst = get_instance("semisimple:2")
    madd = inst.add_of(["S1"])
    rep = verify_extyon(madd, [(inst.module("S2"), inst.module("S1"))])
    assert rep.ok and rep.details["precondition_failures"]


def test_iso_on_ext_on_self_injective_algebra():
    inst = get_instance("truncpoly:4")
    madd = inst.add_of(["U4", "U2"])
    mods = inst.indecomposable_reps() + [random_module(inst, s) for s in range(3)]
    rep = verify_iso_on_ext(madd, 3, mods)
    assert rep.ok and rep.details["tables"]
    assert "precondition_failures" in rep.details


def test_duality_over_dual_numbers():
    inst = get_instance("truncpoly:2")
    madd = inst.add_of(["P"])
    rep = verify_cogen1_duality(madd, inst.indecomposable_reps(), k=2)
    assert rep.ok
    # Psi is the classical dual here: Hom tables are transposed, dimensions preserved
    for row in rep.details["hom_table"]:
        assert row["hom"] == row["hom_psi"]


def test_duality_needs_faithful_balance():
    inst = get_instance("semisimple:2")
    rep = verify_cogen1_duality(inst.add_of(["S1"]), inst.indecomposable_reps())
    assert rep.status == "precondition-failed"


def test_tilde_category_objects_are_psi_of_projectives():
    inst = get_instance("a_n:2")
    madd = inst.add_of(inst.generator_cogenerator())
    tilde = tilde_category(madd)
    assert len(tilde.objects) == inst.category.n


def test_classify_and_sweep_agree():
    inst = get_instance("a_n:2")
    table = sweep_subcategories(inst, 2)
    assert table["schema"] == REPORT_SCHEMA and table["status"] == "verified"
    rows = {tuple(r["M"]): r for r in table["rows"]}
    assert len(rows) == 7
    assert rows[("[1,1]",)]["faithfully_balanced"] is False
    names, madd = enumerate_basic_subcategories(inst)[-1]
    row = classify(madd, [(n, inst.module(n)) for n in inst.indecomposables], 2)
    assert row.faithfully_balanced and row.symmetry_agrees()


def test_sweep_is_deterministic():
    inst = get_instance("truncpoly:3")
    assert sweep_subcategories(inst, 2) == sweep_subcategories(inst, 2)


def test_reports_serialise():
    import json

    inst = get_instance("truncpoly:2")
    rep = verify_symmetry(inst.add_of(["P"]), 2)
    out = json.loads(json.dumps(rep.to_json()))
    assert out["schema"] == REPORT_SCHEMA and out["statement"] == "symmetry"
