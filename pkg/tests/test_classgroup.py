"""Tests for reduced forms, composition and class group structure."""

import sys
import os
import random

import pytest
from hypothesis import given, settings, strategies as st

# Add parent directory to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.picardcusps.arithmetic.classgroup import (
    ClassGroup,
    FormClass,
    QuadraticForm,
    class_action,
    class_group,
    compose,
    enumerate_reduced,
    enumerate_reduced_forms,
    h,
    inverse,
    power,
    primary_order,
    principal_form,
    reduce,
    reduce_with_transform,
    reduced_forms_in_range,
    three_torsion_from_counts,
    torsion_order,
)
from src.picardcusps.arithmetic.quadfield import fundamental_discriminants
from src.picardcusps.utils.validators import InvariantViolation, ValidationError

DISCS_300 = list(fundamental_discriminants(3, 300))

CLASS_NUMBER_ONE = [-3, -4, -7, -8, -11, -19, -43, -67, -163]


def test_reduced_forms_disc_23():
    forms = enumerate_reduced_forms(-23)
    assert [f.as_tuple() for f in forms] == [(1, 1, 6), (2, 1, 3), (2, -1, 3)]


def test_reduced_forms_disc_20():
    assert [f.as_tuple() for f in enumerate_reduced_forms(-20)] == [(1, 0, 5), (2, 2, 3)]


@pytest.mark.parametrize("disc", CLASS_NUMBER_ONE)
def test_class_number_one(disc):
    assert h(disc) == 1
    assert enumerate_reduced(disc).structure == ()


@pytest.mark.parametrize("disc,expected", [(-23, 3), (-20, 2), (-47, 5), (-84, 4), (-199, 9), (-4027, 9)])
def test_class_numbers(disc, expected):
    assert h(disc) == expected


def test_form_class_must_be_reduced():
    with pytest.raises(InvariantViolation):
        FormClass(3, 1, 2)
    assert QuadraticForm(3, 1, 2).is_reduced() is False


def test_reduce_with_transform():
    form = QuadraticForm(4, 5, 3)
    reduced, m = reduce_with_transform(form)
    assert reduced == FormClass(2, -1, 3)
    assert form.transform(m) == QuadraticForm(2, -1, 3)
    (a, b), (c, d) = m
    assert a * d - b * c == 1


def test_reduce_rejects_bad_forms():
    with pytest.raises(ValidationError):
        reduce(QuadraticForm(2, 2, 2))
    with pytest.raises(ValidationError):
        reduce(QuadraticForm(1, 3, 1))


def test_composition_disc_23():
    f = FormClass(2, 1, 3)
    assert compose(f, f) == FormClass(2, -1, 3)
    assert compose(f, FormClass(2, -1, 3)) == principal_form(-23)
    assert power(f, 3) == principal_form(-23)
    assert inverse(f) == FormClass(2, -1, 3)


def test_compose_rejects_mixed_discriminants():
    with pytest.raises(ValidationError):
        compose(FormClass(2, 1, 3), FormClass(2, 2, 3))


def test_structure_4027():
    group = enumerate_reduced(-4027)
    assert group.h == 9
    assert group.structure == (3, 3)
    assert group.torsion_order(3) == 9
    assert group.primary_order(3) == 9


def test_structure_199_cyclic():
    group = enumerate_reduced(-199)
    assert group.structure == (9,)
    assert torsion_order(-199, 3) == 3
    assert primary_order(-199, 3) == 9
    assert group.sylow_profile(3) == [3, 9]


def test_structure_84():
    group = enumerate_reduced(-84)
    assert group.structure == (2, 2)
    assert group.torsion_order(2) == 4


@pytest.mark.parametrize("disc", DISCS_300)
def test_group_laws_exhaustive(disc):
    group = class_group(disc)
    identity = group.identity
    for f in group:
        assert compose(f, identity) == f
        assert compose(f, inverse(f)) == identity
        assert power(f, group.h) == identity
        assert group.h % group.order(f) == 0
    product = 1
    for d in group.structure:
        product *= d
    assert product == group.h
    for i in range(len(group.structure) - 1):
        assert group.structure[i + 1] % group.structure[i] == 0


@pytest.mark.parametrize("disc", DISCS_300)
def test_generators_have_structure_orders(disc):
    group = class_group(disc)
    assert len(group.generators) == len(group.structure)
    for g, d in zip(group.generators, group.structure):
        assert group.order(g) == d


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(DISCS_300), st.data())
def test_composition_associative_commutative(disc, data):
    forms = class_group(disc).forms
    f, g, k = (data.draw(st.sampled_from(forms)) for _ in range(3))
    assert compose(compose(f, g), k) == compose(f, compose(g, k))
    assert compose(f, g) == compose(g, f)


@pytest.mark.parametrize("disc", DISCS_300)
def test_torsion_counts(disc):
    group = class_group(disc)
    for q in (2, 3, 5):
        count = sum(1 for f in group if power(f, q) == group.identity)
        assert group.torsion_order(q) == count
        assert group.h % count == 0
        assert group.primary_order(q) % count == 0


def test_three_torsion_from_counts_matches():
    for disc in fundamental_discriminants(3, 1500):
        group = class_group(disc)
        assert three_torsion_from_counts(group.h, group.forms) == group.torsion_order(3)


def test_reduced_forms_in_range_matches_single():
    block = reduced_forms_in_range(200, 400)
    assert sorted(block, reverse=True) == list(fundamental_discriminants(200, 400))
    for disc, forms in block.items():
        assert forms == enumerate_reduced_forms(disc)


def test_class_action():
    t = FormClass(2, 1, 3)
    identity = principal_form(-23)
    assert class_action(identity, t, q=3) == inverse(t)
    assert class_action(t, t) == identity
    with pytest.raises(ValidationError):
        class_action(identity, t, q=2)
    with pytest.raises(ValidationError):
        class_action(principal_form(-20), t)


@pytest.mark.parametrize("disc", [-4027, -3299])
def test_three_torsion_action_is_free(disc):
    group = class_group(disc)
    assert group.torsion_order(3) == 9
    torsion = [t for t in group if power(t, 3) == group.identity and t != group.identity]
    assert len(torsion) == 8

    for t in torsion:
        images = [class_action(c, t, q=3) for c in group.forms]
        assert sorted(images, key=FormClass.sort_key) == sorted(group.forms, key=FormClass.sort_key)
        assert all(image != c for image, c in zip(images, group.forms))

    orbits = {frozenset([c] + [class_action(c, t, q=3) for t in torsion]) for c in group.forms}
    assert all(len(orbit) == 9 for orbit in orbits)
    assert len(orbits) == group.h // 9


@pytest.mark.slow
def test_group_laws_near_hundred_thousand():
    rng = random.Random(0)
    discs = rng.sample(list(fundamental_discriminants(90000, 100000)), 40)
    for disc in discs:
        group = class_group(disc)
        forms = group.forms
        for _ in range(12):
            f, g, k = rng.choice(forms), rng.choice(forms), rng.choice(forms)
            assert compose(compose(f, g), k) == compose(f, compose(g, k))
            assert compose(f, g) == compose(g, f)
        product = 1
        for d in group.structure:
            product *= d
        assert product == group.h
        for i in range(len(group.structure) - 1):
            assert group.structure[i + 1] % group.structure[i] == 0


def test_class_group_validation():
    for bad in (-12, 5, 0, -16):
        with pytest.raises(ValidationError):
            class_group(bad)
    with pytest.raises(ValidationError):
        class_group(-23).torsion_order(1)


def test_membership():
    group = class_group(-23)
    assert FormClass(2, 1, 3) in group
    assert QuadraticForm(4, 5, 3) in group
    assert FormClass(2, 2, 3) not in group
    assert len(group) == 3
