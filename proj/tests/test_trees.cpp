#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "paulictx/trees.hpp"
#include "support/generators.hpp"

using namespace paulictx;

namespace {

PauliOp op(const char* w) {
    return PauliOp::from_letters(w);
}

DeterminingTree lf(const char* w) {
    return leaf(op(w));
}

DeterminingTree node(std::vector<DeterminingTree> children) {
    return parent_of(std::move(children));
}

PauliSet set_of(std::initializer_list<const char*> words) {
    std::vector<PauliOp> ops;
    for (const char* w : words) {
        ops.push_back(op(w));
    }
    return PauliSet(std::move(ops));
}

// The two canonical trees over the magic-square corners: +YY from XZ and ZX,
// -YY from XX and ZZ.
DeterminingTree plus_yy() {
    return node({node({lf("XI"), lf("IZ")}), node({lf("ZI"), lf("IX")})});
}

DeterminingTree minus_yy() {
    return node({node({lf("XI"), lf("IX")}), node({lf("ZI"), lf("IZ")})});
}

PauliSet corners() {
    return set_of({"XI", "IX", "ZI", "IZ"});
}

Assignment all_plus(const DeterminingTree& t) {
    Assignment a;
    for (const auto& [o, count] : leaf_multiset(t)) {
        a[o] = +1;
    }
    return a;
}

// Second form of the forced-outcome rule: product over every leaf occurrence,
// multiplicity included, rather than over the odd-multiplicity set.
int evaluate_by_multiplicity(const DeterminingTree& t, const Assignment& a) {
    int value = +1;
    for (const auto& [o, count] : leaf_multiset(t)) {
        for (std::size_t k = 0; k < count; ++k) {
            value *= a.at(o);
        }
    }
    return value;
}

}  // namespace

TEST_CASE("parent_of folds commuting children with signs") {
    DeterminingTree xz = node({lf("XI"), lf("IZ")});
    CHECK(xz.node == SignedPauli{op("XZ"), +1});
    CHECK(xz.children.size() == 2);

    DeterminingTree myy = node({lf("XX"), lf("ZZ")});
    CHECK(myy.node == SignedPauli{op("YY"), -1});

    CHECK_THROWS_AS(node({lf("XI"), lf("ZI")}), ContractError);
    CHECK_THROWS_AS(node({}), ContractError);
}

TEST_CASE("the canonical square trees have the expected roots") {
    CHECK(plus_yy().node == SignedPauli{op("YY"), +1});
    CHECK(minus_yy().node == SignedPauli{op("YY"), -1});
}

TEST_CASE("validate accepts the canonical trees") {
    CHECK(!validate(plus_yy(), corners()).has_value());
    CHECK(!validate(minus_yy(), corners()).has_value());
}

TEST_CASE("validate reports each defect kind with a path") {
    SUBCASE("anticommuting siblings") {
        DeterminingTree bad{SignedPauli{op("YY"), +1}, {lf("XZ"), lf("XX")}};
        auto defect = validate(bad, set_of({"XZ", "XX"}));
        REQUIRE(defect.has_value());
        CHECK(defect->kind == TreeDefectKind::kSiblingsAnticommute);
    }
    SUBCASE("parent is not the product of its children") {
        DeterminingTree bad{SignedPauli{op("YY"), -1}, {lf("XZ"), lf("ZX")}};
        auto defect = validate(bad, set_of({"XZ", "ZX"}));
        REQUIRE(defect.has_value());
        CHECK(defect->kind == TreeDefectKind::kProductMismatch);
    }
    SUBCASE("leaf outside the universe") {
        auto defect = validate(plus_yy(), set_of({"XI", "IX", "ZI"}));
        REQUIRE(defect.has_value());
        CHECK(defect->kind == TreeDefectKind::kLeafOutsideUniverse);
        CHECK(defect->path == std::vector<std::size_t>{0, 1});  // first IZ leaf in DFS order
    }
    SUBCASE("negative leaf") {
        DeterminingTree bad{SignedPauli{op("XI"), -1}, {}};
        auto defect = validate(bad, corners());
        REQUIRE(defect.has_value());
        CHECK(defect->kind == TreeDefectKind::kLeafNegative);
    }
    SUBCASE("width mismatch against the universe") {
        auto defect = validate(lf("XI"), set_of({"XII", "IXI"}));
        REQUIRE(defect.has_value());
        CHECK(defect->kind == TreeDefectKind::kQubitMismatch);
    }
}

TEST_CASE("determining_set collects odd-multiplicity leaves") {
    CHECK(determining_set(plus_yy()) ==
          DeterminingSet{op("XI"), op("IX"), op("ZI"), op("IZ")});
    CHECK(determining_set(lf("XX")) == DeterminingSet{op("XX")});
    DeterminingTree merged = merge_identity_witness(plus_yy(), minus_yy());
    CHECK(determining_set(merged).empty());
}

TEST_CASE("evaluate applies the forced-outcome rule") {
    DeterminingTree t = plus_yy();
    Assignment a = all_plus(t);
    CHECK(evaluate(t, a) == +1);
    a[op("XI")] = -1;
    CHECK(evaluate(t, a) == -1);

    DeterminingTree merged = merge_identity_witness(plus_yy(), minus_yy());
    std::mt19937 rng(59);
    std::uniform_int_distribution<int> flip(0, 1);
    for (int trial = 0; trial < 16; ++trial) {
        Assignment r;
        for (const auto& [o, count] : leaf_multiset(merged)) {
            r[o] = flip(rng) ? +1 : -1;
        }
        CHECK(evaluate(merged, r) == +1);  // empty determining set forces +1
    }
}

TEST_CASE("evaluate rejects missing or malformed values") {
    DeterminingTree t = plus_yy();
    Assignment partial;
    partial[op("XI")] = +1;
    CHECK_THROWS_AS(evaluate(t, partial), IncompleteAssignmentError);
    Assignment bad = all_plus(t);
    bad[op("ZI")] = 0;
    CHECK_THROWS_AS(evaluate(t, bad), ContractError);
}

TEST_CASE("binarize cascades wide nodes and keeps narrow ones") {
    SUBCASE("three diagonal children get an intermediate node") {
        DeterminingTree wide = node({lf("ZII"), lf("IZI"), lf("IIZ")});
        REQUIRE(wide.children.size() == 3);
        DeterminingTree bin = binarize(wide);
        CHECK(bin.node == wide.node);
        REQUIRE(bin.children.size() == 2);
        CHECK(bin.children[0].node == SignedPauli{op("ZZI"), +1});
        CHECK(bin.children[1].node.op == op("IIZ"));
        CHECK(leaf_multiset(bin) == leaf_multiset(wide));
        CHECK(!validate(bin, set_of({"ZII", "IZI", "IIZ"})).has_value());
    }
    SUBCASE("binary trees pass through unchanged") {
        CHECK(binarize(plus_yy()) == plus_yy());
        CHECK(binarize(minus_yy()) == minus_yy());
        CHECK(binarize(lf("XX")) == lf("XX"));
    }
}

TEST_CASE("hoist_universal moves every occurrence next to the root") {
    // +ZZI <- {+ZIZ <- {ZII, IIZ}, +IZZ <- {IZI, IIZ}}; IIZ commutes with all.
    DeterminingTree t =
        node({node({lf("ZII"), lf("IIZ")}), node({lf("IZI"), lf("IIZ")})});
    REQUIRE(t.node == SignedPauli{op("ZZI"), +1});

    DeterminingTree hoisted = hoist_universal(t, SignedPauli{op("IIZ"), +1});
    CHECK(hoisted.node == t.node);
    CHECK(leaf_multiset(hoisted) == leaf_multiset(t));
    std::size_t at_root = 0;
    for (const DeterminingTree& child : hoisted.children) {
        if (child.node.op == op("IIZ")) {
            CHECK(child.is_leaf());
            ++at_root;
        } else {
            // no IIZ may remain below any other child
            CHECK(leaf_multiset(child).count(op("IIZ")) == 0);
        }
    }
    CHECK(at_root == 2);
    CHECK(!validate(hoisted, set_of({"ZII", "IZI", "IIZ"})).has_value());
}

TEST_CASE("hoist_universal contract checks") {
    SUBCASE("tree without the operator is returned unchanged") {
        DeterminingTree t = node({lf("ZII"), lf("IZI")});
        CHECK(hoist_universal(t, SignedPauli{op("IIZ"), +1}) == t);
    }
    SUBCASE("anticommuting operator is refused") {
        CHECK_THROWS_AS(
            hoist_universal(plus_yy(), SignedPauli{op("XI"), +1}), ContractError);
    }
    SUBCASE("non-binary input is refused") {
        DeterminingTree wide = node({lf("ZII"), lf("IZI"), lf("IIZ")});
        CHECK_THROWS_AS(
            hoist_universal(wide, SignedPauli{op("IIZ"), +1}), ContractError);
    }
}

TEST_CASE("hoist_universal terminates when occurrences sit at different depths") {
    // +ZII <- {IIZ, +ZIZ <- {IIZ, ZII}}: naive local rewrites bounce the two
    // occurrences past each other forever; the detach-and-reattach pass must
    // settle.
    DeterminingTree t = node({lf("IIZ"), node({lf("IIZ"), lf("ZII")})});
    REQUIRE(t.node == SignedPauli{op("ZII"), +1});
    DeterminingTree hoisted = hoist_universal(t, SignedPauli{op("IIZ"), +1});
    CHECK(hoisted.node == t.node);
    CHECK(leaf_multiset(hoisted) == leaf_multiset(t));
    std::size_t at_root = 0;
    for (const DeterminingTree& child : hoisted.children) {
        if (child.node.op == op("IIZ")) {
            ++at_root;
        }
    }
    CHECK(at_root == 2);
}

TEST_CASE("merge_identity_witness builds the negative-identity witness") {
    DeterminingTree merged = merge_identity_witness(plus_yy(), minus_yy());
    CHECK(merged.node == SignedPauli{PauliOp::identity(2), -1});
    CHECK(determining_set(merged).empty());
    CHECK(!validate(merged, corners()).has_value());

    SUBCASE("unequal determining sets are refused") {
        DeterminingTree other_minus = node({lf("XX"), lf("ZZ")});  // -YY, different leaves
        CHECK_THROWS_AS(merge_identity_witness(plus_yy(), other_minus), ContractError);
    }
    SUBCASE("mismatched roots are refused") {
        CHECK_THROWS_AS(merge_identity_witness(plus_yy(), plus_yy()), ContractError);
        DeterminingTree xz = node({lf("XI"), lf("IZ")});
        CHECK_THROWS_AS(merge_identity_witness(xz, minus_yy()), ContractError);
    }
}

TEST_CASE("split_identity_witness inverts the merge") {
    DeterminingTree merged = merge_identity_witness(plus_yy(), minus_yy());
    auto [plus, minus] = split_identity_witness(merged);
    CHECK(plus == plus_yy());
    CHECK(minus == minus_yy());
    CHECK(determining_set(plus) == determining_set(minus));
}

TEST_CASE("split_identity_witness binarizes wide roots first") {
    // -II <- {+YY, +XX <- {XI,IX}, +ZZ <- {ZI,IZ}}: every corner leaf appears
    // twice, so the determining set is empty and the root product is -II.
    DeterminingTree wide = node({plus_yy(), node({lf("XI"), lf("IX")}), node({lf("ZI"), lf("IZ")})});
    REQUIRE(wide.node == SignedPauli{PauliOp::identity(2), -1});
    REQUIRE(determining_set(wide).empty());
    auto [plus, minus] = split_identity_witness(wide);
    CHECK(plus.node == SignedPauli{op("ZZ"), +1});
    CHECK(minus.node == SignedPauli{op("ZZ"), -1});
    CHECK(determining_set(plus) == determining_set(minus));
}

TEST_CASE("split_identity_witness contract checks") {
    SUBCASE("root must be the negative identity") {
        CHECK_THROWS_AS(split_identity_witness(plus_yy()), ContractError);
    }
    SUBCASE("nonempty determining set is refused") {
        DeterminingTree other_minus = node({lf("XX"), lf("ZZ")});
        DeterminingTree bad{SignedPauli{PauliOp::identity(2), -1}, {plus_yy(), other_minus}};
        REQUIRE(!determining_set(bad).empty());
        CHECK_THROWS_AS(split_identity_witness(bad), ContractError);
    }
}

TEST_CASE("single_leaf_witness walks the shared path") {
    SUBCASE("b = XI reproduces the known shape") {
        DeterminingTree t = single_leaf_witness(plus_yy(), minus_yy(), op("XI"));
        CHECK(t.node == SignedPauli{op("XI"), -1});
        CHECK(determining_set(t) == DeterminingSet{op("XI")});
        for (const auto& [o, count] : leaf_multiset(t)) {
            if (o != op("XI")) {
                CHECK(count % 2 == 0);  // every other leaf appears evenly
                CHECK(count == 2);
            }
        }
        CHECK(!validate(t, corners()).has_value());
    }
    SUBCASE("b = IZ works symmetrically") {
        DeterminingTree t = single_leaf_witness(plus_yy(), minus_yy(), op("IZ"));
        CHECK(t.node == SignedPauli{op("IZ"), -1});
        CHECK(determining_set(t) == DeterminingSet{op("IZ")});
        CHECK(!validate(t, corners()).has_value());
    }
    SUBCASE("b outside the shared determining set is refused") {
        CHECK_THROWS_AS(single_leaf_witness(plus_yy(), minus_yy(), op("XX")), ContractError);
    }
}

TEST_CASE("witness_from_quadruple on the cycle reproduces the merged witness") {
    DeterminingTree t =
        witness_from_quadruple(QuadrupleForm::kCycle, op("XI"), op("IX"), op("IZ"), op("ZI"));
    CHECK(t == merge_identity_witness(plus_yy(), minus_yy()));
}

TEST_CASE("witness_from_quadruple yields valid empty-set witnesses for every form") {
    struct Case {
        QuadrupleForm form;
        const char* a;
        const char* b;
        const char* c;
        const char* d;
    };
    const Case cases[] = {
        {QuadrupleForm::kWedge, "ZZ", "XX", "ZI", "YI"},
        {QuadrupleForm::kChain, "ZZ", "ZI", "XX", "IY"},
        {QuadrupleForm::kCycle, "XI", "IX", "IZ", "ZI"},
    };
    for (const Case& k : cases) {
        CAPTURE(form_name(k.form));
        DeterminingTree t =
            witness_from_quadruple(k.form, op(k.a), op(k.b), op(k.c), op(k.d));
        CHECK(t.node == SignedPauli{PauliOp::identity(2), -1});
        CHECK(determining_set(t).empty());
        PauliSet universe = set_of({k.a, k.b, k.c, k.d});
        CHECK(!validate(t, universe).has_value());
        for (const auto& [o, count] : leaf_multiset(t)) {
            CHECK(universe.contains(o));
        }
    }
}

TEST_CASE("witness_from_quadruple refuses mismatched forms") {
    CHECK_THROWS_AS(
        witness_from_quadruple(QuadrupleForm::kCycle, op("ZZ"), op("XX"), op("ZI"), op("YI")),
        ContractError);
    CHECK_THROWS_AS(
        witness_from_quadruple(QuadrupleForm::kWedge, op("XI"), op("XI"), op("IZ"), op("ZI")),
        ContractError);
}

TEST_CASE("canonicalized sorts children without changing meaning") {
    DeterminingTree t = minus_yy();
    std::swap(t.children[0], t.children[1]);  // now {ZZ-subtree, XX-subtree}
    DeterminingTree c = canonicalized(t);
    CHECK(c.node == t.node);
    CHECK(c.children[0].node.op == op("XX"));
    CHECK(c.children[1].node.op == op("ZZ"));
    CHECK(leaf_multiset(c) == leaf_multiset(t));
    CHECK(canonicalized(c) == c);
    CHECK(canonicalized(minus_yy()) == canonicalized(t));
}

TEST_CASE("indented text form round-trips") {
    DeterminingTree merged = merge_identity_witness(plus_yy(), minus_yy());
    std::string text = to_text(merged);
    CHECK(tree_from_text(text) == merged);

    std::string expected =
        "-II\n"
        "  YY\n"
        "    XZ\n"
        "      XI\n"
        "      IZ\n"
        "    ZX\n"
        "      ZI\n"
        "      IX\n"
        "  -YY\n"
        "    XX\n"
        "      XI\n"
        "      IX\n"
        "    ZZ\n"
        "      ZI\n"
        "      IZ\n";
    CHECK(text == expected);
}

TEST_CASE("tree_from_text rejects malformed layouts") {
    CHECK_THROWS_AS(tree_from_text(""), ParseError);
    CHECK_THROWS_AS(tree_from_text("YY\n   XZ\n"), ParseError);       // odd indent
    CHECK_THROWS_AS(tree_from_text("YY\n    XZ\n"), ParseError);      // depth jump
    CHECK_THROWS_AS(tree_from_text("XI\nIX\n"), ParseError);          // two roots
}

TEST_CASE("random trees stay valid through binarize and evaluate forms agree") {
    std::mt19937 rng(61);
    std::uniform_int_distribution<std::size_t> leaves(4, 9);
    std::uniform_int_distribution<int> flip(0, 1);
    for (int trial = 0; trial < 120; ++trial) {
        CAPTURE(trial);
        DeterminingTree t = gen::random_tree(rng, 3, leaves(rng));
        PauliSet universe(3, gen::leaf_universe(t));
        REQUIRE(!validate(t, universe).has_value());

        DeterminingTree bin = binarize(t);
        CHECK(bin.node == t.node);
        CHECK(leaf_multiset(bin) == leaf_multiset(t));
        CHECK(!validate(bin, universe).has_value());

        Assignment a;
        for (const auto& [o, count] : leaf_multiset(t)) {
            a[o] = flip(rng) ? +1 : -1;
        }
        CHECK(evaluate(t, a) == evaluate_by_multiplicity(t, a));
        CHECK(evaluate(bin, a) == evaluate(t, a));

        CHECK(tree_from_text(to_text(t)) == t);
    }
}
