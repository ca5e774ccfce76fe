//===-- test_intset.cpp - Integer set engine tests -------------------------===//

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polyrace/IntSet.h"
#include "support/Enumerate.h"

#include <random>

using namespace polyrace;
using testsupport::pointsIn;
using testsupport::satisfies;

namespace {

AffineExpr v(const std::string &n) { return AffineExpr::var(n); }

IntSet setOf(std::vector<std::string> dims, std::vector<std::string> params,
             std::vector<std::pair<CmpKind, AffineExpr>> cs) {
  IntSet s = IntSet::universe(Space{std::move(dims), std::move(params)});
  for (auto &[k, e] : cs)
    s = s.withConstraint(k, e);
  return s;
}

} // namespace

TEST_CASE("emptiness basics") {
  // contradictory bounds
  IntSet a = setOf({"i"}, {},
                   {{CmpKind::Ge, v("i")}, {CmpKind::Ge, -v("i") - 1}});
  CHECK(isEmptyInt(a));

  // rationally nonempty, integrally empty (parity)
  IntSet b = setOf({"i"}, {},
                   {{CmpKind::Eq, v("i") * 2 - 1},
                    {CmpKind::Ge, v("i")},
                    {CmpKind::Ge, -v("i") + 10}});
  CHECK(isEmptyInt(b));

  // j - 1 = j inside an otherwise feasible box
  IntSet c = setOf({"i", "j"}, {},
                   {{CmpKind::Ge, v("i")},
                    {CmpKind::Ge, -v("i") + 5},
                    {CmpKind::Ge, v("j") - 1},
                    {CmpKind::Ge, -v("j") + 6},
                    {CmpKind::Eq, (v("j") - 1) - v("j")}});
  CHECK(isEmptyInt(c));

  // universe / empty corner cases
  CHECK_FALSE(isEmptyInt(IntSet::universe(Space{{"i"}, {}})));
  CHECK(isEmptyInt(IntSet::empty(Space{{"i"}, {}})));
  CHECK_FALSE(isEmptyInt(IntSet::universe(Space{{}, {}}))); // 0-dim point
}

TEST_CASE("dependence polyhedron with concrete sizes is nonempty") {
  // { (i,j) -> (i,j-1) : 0 <= i <= m-1 and 1 <= j <= n-1 } at m = n = 7
  IntSet s = setOf({"i", "j", "i'", "j'"}, {},
                   {{CmpKind::Ge, v("i")},
                    {CmpKind::Ge, -v("i") + 6},
                    {CmpKind::Ge, v("j") - 1},
                    {CmpKind::Ge, -v("j") + 6},
                    {CmpKind::Eq, v("i'") - v("i")},
                    {CmpKind::Eq, v("j'") - (v("j") - 1)}});
  CHECK_FALSE(isEmptyInt(s));
}

TEST_CASE("parametric emptiness treats parameters existentially") {
  // 0 <= i <= n-1 is nonempty for some n
  IntSet s = setOf({"i"}, {"n"},
                   {{CmpKind::Ge, v("i")}, {CmpKind::Ge, v("n") - 1 - v("i")}});
  CHECK_FALSE(isEmptyInt(s));

  // i <= n-1 and i >= n+1 is empty for every n
  IntSet t = setOf({"i"}, {"n"},
                   {{CmpKind::Ge, v("n") - 1 - v("i")},
                    {CmpKind::Ge, v("i") - v("n") - 1}});
  CHECK(isEmptyInt(t));

  // parameter floors: i = n - 1 and i >= 1 needs n >= 2
  IntSet u = setOf({"i"}, {"n"},
                   {{CmpKind::Eq, v("i") - v("n") + 1},
                    {CmpKind::Ge, v("i") - 1}});
  EmptinessOptions floors;
  floors.paramFloors["n"] = 2;
  CHECK_FALSE(isEmptyInt(u, floors));
  EmptinessOptions box;
  box.paramBox["n"] = {0, 1};
  CHECK(isEmptyInt(u, box));
}

TEST_CASE("projection on delta sets reproduces per-dimension views") {
  IntSet d = setOf({"di", "dj"}, {},
                   {{CmpKind::Eq, v("di")}, {CmpKind::Eq, v("dj") - 1}});
  IntSet pi = projectOnto(d, {"di"});
  IntSet pj = projectOnto(d, {"dj"});
  CHECK(pi.str() == "{ [di] : di = 0 }");
  CHECK(pj.str() == "{ [dj] : dj = 1 }");

  // identity projection
  IntSet all = projectOnto(d, {"di", "dj"});
  std::set<testsupport::Point> expect = pointsIn(d, -4, 4);
  std::set<testsupport::Point> got = pointsIn(all, -4, 4);
  CHECK(expect == got);
}

TEST_CASE("deltas of the paper relation") {
  // source (i,j), target (i,j-1), bounds 0 <= i <= m-1, 1 <= j <= n-1
  IntSet s = setOf({"i", "j", "i'", "j'"}, {"m", "n"},
                   {{CmpKind::Ge, v("i")},
                    {CmpKind::Ge, v("m") - 1 - v("i")},
                    {CmpKind::Ge, v("j") - 1},
                    {CmpKind::Ge, v("n") - 1 - v("j")},
                    {CmpKind::Eq, v("i'") - v("i")},
                    {CmpKind::Eq, v("j'") - (v("j") - 1)}});
  IntRel r(s, 2);
  IntSet d = deltas(r);
  REQUIRE(d.space().dims == std::vector<std::string>{"di", "dj"});
  EmptinessOptions floors;
  floors.paramFloors["m"] = 2;
  floors.paramFloors["n"] = 2;
  // the only delta is (0, -1)
  CHECK_FALSE(isEmptyInt(d, floors));
  CHECK_FALSE(
      isEmptyInt(intersect(d, setOf({"di", "dj"}, {},
                                    {{CmpKind::Eq, v("di")},
                                     {CmpKind::Eq, v("dj") + 1}})),
                 floors));
  CHECK(isEmptyInt(
      intersect(d, setOf({"di", "dj"}, {}, {{CmpKind::Ge, v("dj")}})),
      floors));
  CHECK(isEmptyInt(
      intersect(d, setOf({"di", "dj"}, {},
                         {{CmpKind::Ge, v("di") - 1}})),
      floors));
  CHECK(isEmptyInt(
      intersect(d, setOf({"di", "dj"}, {},
                         {{CmpKind::Ge, -v("di") - 1}})),
      floors));

  // empty relation -> empty delta set
  IntRel e(IntSet::empty(Space{{"a", "b"}, {}}), 1);
  CHECK(isEmptyInt(deltas(e)));

  // identity relation -> zero distance
  IntSet idS = setOf({"a", "b"}, {}, {{CmpKind::Eq, v("b") - v("a")}});
  IntSet idD = deltas(IntRel(idS, 1));
  CHECK(idD.str() == "{ [da] : da = 0 }");
}

TEST_CASE("lexLess definition and union over levels") {
  IntRel l22 = lexLess(2, 2);
  CHECK(l22.str() == "{ [s1, s2] -> [t1, t2] : s1 - t1 = 0 and -s2 + t2 - 1 >= 0 }");
  IntRel l11 = lexLess(1, 1);
  for (long s = -2; s <= 2; ++s)
    for (long t = -2; t <= 2; ++t)
      CHECK(satisfies(l11.set(), {s, t}) == (s < t));

  // union over k = 1..n is the full strict lexicographic order on a box
  IntSet u = unionRel(lexLess(2, 1), lexLess(2, 2)).set();
  for (const auto &p : testsupport::boxPoints(4, 0, 3)) {
    bool lex = (p[0] < p[2]) || (p[0] == p[2] && p[1] < p[3]);
    CHECK(satisfies(u, p) == lex);
  }
}

TEST_CASE("set algebra basics") {
  IntSet box = setOf({"i"}, {},
                     {{CmpKind::Ge, v("i")}, {CmpKind::Ge, -v("i") + 5}});
  CHECK(isEmptyInt(intersect(box, IntSet::empty(Space{{"i"}, {}}))));

  // union idempotence, checked pointwise
  IntSet u = unionSet(box, box);
  for (long x = -2; x <= 8; ++x)
    CHECK(satisfies(u, {x}) == satisfies(box, {x}));

  // compose access map with its inverse: iterations touching the same cell
  // A = { (i) -> (i+1) : 0 <= i <= 9 }   (writes a[i+1])
  IntSet aS = setOf({"i", "c"}, {},
                    {{CmpKind::Ge, v("i")},
                     {CmpKind::Ge, -v("i") + 9},
                     {CmpKind::Eq, v("c") - v("i") - 1}});
  IntRel a(aS, 1);
  // B = { (i) -> (i) : 0 <= i <= 9 }     (reads a[i])
  IntSet bS = setOf({"i", "c"}, {},
                    {{CmpKind::Ge, v("i")},
                     {CmpKind::Ge, -v("i") + 9},
                     {CmpKind::Eq, v("c") - v("i")}});
  IntRel b(bS, 1);
  IntRel conflict = compose(a, inverse(b)); // writer i -> reader i+1
  CHECK_FALSE(isEmptyInt(conflict.set()));
  for (long s = 0; s <= 9; ++s)
    for (long t = 0; t <= 10; ++t)
      CHECK(satisfies(conflict.set(), {s, t}) == (t == s + 1 && s <= 9 && t <= 9));
}

TEST_CASE("applyDomain and applyRange restrict tuples") {
  IntSet rS = setOf({"x", "y"}, {}, {{CmpKind::Eq, v("y") - v("x")}});
  IntRel r(rS, 1);
  IntSet dom = setOf({"x"}, {},
                     {{CmpKind::Ge, v("x")}, {CmpKind::Ge, -v("x") + 3}});
  IntRel rd = applyDomain(r, dom);
  for (long x = -2; x <= 5; ++x)
    for (long t = -2; t <= 5; ++t)
      CHECK(satisfies(rd.set(), {x, t}) == (x == t && 0 <= x && x <= 3));
  IntRel rr = applyRange(r, dom);
  for (long x = -2; x <= 5; ++x)
    for (long t = -2; t <= 5; ++t)
      CHECK(satisfies(rr.set(), {x, t}) == (x == t && 0 <= t && t <= 3));
}

TEST_CASE("DimensionLimit guards") {
  Space big;
  for (int i = 0; i < 13; ++i)
    big.dims.push_back("x" + std::to_string(i));
  CHECK_THROWS_AS(isEmptyInt(IntSet::universe(big)), DimensionLimit);
  Space ok{{"x"}, {}};
  IntSet s = IntSet::universe(ok);
  Piece p;
  for (int i = 0; i < 65; ++i) {
    Constraint c;
    c.kind = CmpKind::Ge;
    c.coeff = {Int(1)};
    c.cst = i;
    p.push_back(c);
  }
  IntSet crowded(ok);
  crowded.addPiece(p);
  CHECK_THROWS_AS(isEmptyInt(crowded), DimensionLimit);
}

TEST_CASE("printer renders bound chains") {
  IntSet dom = setOf({"i", "j"}, {"m", "n"},
                     {{CmpKind::Ge, v("i")},
                      {CmpKind::Ge, v("m") - 1 - v("i")},
                      {CmpKind::Ge, v("j") - 1},
                      {CmpKind::Ge, v("n") - 1 - v("j")}});
  dom.setTupleName("S0");
  CHECK(dom.str() == "{ S0[i, j] : 0 <= i <= m - 1 and 1 <= j <= n - 1 }");
}

//===----------------------------------------------------------------------===//
// Randomized agreement with enumeration
//===----------------------------------------------------------------------===//

namespace {

struct RandomSystem {
  IntSet set;
  long lo, hi;
};

RandomSystem randomSystem(std::mt19937 &rng) {
  std::uniform_int_distribution<int> dimCount(1, 4);
  std::uniform_int_distribution<int> consCount(0, 5);
  std::uniform_int_distribution<int> coeff(-4, 4);
  std::uniform_int_distribution<int> cst(-10, 10);
  std::uniform_int_distribution<int> kindPick(0, 4);

  int nd = dimCount(rng);
  Space sp;
  for (int i = 0; i < nd; ++i)
    sp.dims.push_back("x" + std::to_string(i));
  IntSet s = IntSet::universe(sp);
  // bounding box keeps enumeration cheap
  for (int i = 0; i < nd; ++i) {
    s = s.withConstraint(CmpKind::Ge, v(sp.dims[i]) + 10);
    s = s.withConstraint(CmpKind::Ge, -v(sp.dims[i]) + 10);
  }
  int nc = consCount(rng);
  for (int c = 0; c < nc; ++c) {
    AffineExpr e;
    for (int i = 0; i < nd; ++i)
      e += v(sp.dims[i]) * coeff(rng);
    e += AffineExpr(cst(rng));
    s = s.withConstraint(kindPick(rng) == 0 ? CmpKind::Eq : CmpKind::Ge, e);
  }
  return {s, -10, 10};
}

} // namespace

TEST_CASE("isEmptyInt agrees with enumeration on random bounded systems") {
  std::mt19937 rng(20240901);
  for (int iter = 0; iter < 300; ++iter) {
    RandomSystem r = randomSystem(rng);
    bool oracle = testsupport::emptyIn(r.set, r.lo, r.hi);
    CAPTURE(iter);
    CAPTURE(r.set.str());
    CHECK(isEmptyInt(r.set) == oracle);
  }
}

TEST_CASE("projection agrees with enumeration on random bounded systems") {
  std::mt19937 rng(20240902);
  for (int iter = 0; iter < 150; ++iter) {
    RandomSystem r = randomSystem(rng);
    size_t nd = r.set.space().dims.size();
    if (nd < 2)
      continue;
    std::uniform_int_distribution<size_t> keepCount(1, nd - 1);
    size_t nk = keepCount(rng);
    std::vector<std::string> keep(r.set.space().dims.begin(),
                                  r.set.space().dims.begin() + nk);
    IntSet proj = projectOnto(r.set, keep);

    // expected: restrictions of the full set's points
    std::set<testsupport::Point> expect;
    for (const auto &p : pointsIn(r.set, r.lo, r.hi))
      expect.insert(testsupport::Point(p.begin(), p.begin() + nk));
    std::set<testsupport::Point> got = pointsIn(proj, r.lo, r.hi);
    CAPTURE(iter);
    CAPTURE(r.set.str());
    CAPTURE(proj.str());
    CHECK(expect == got);
  }
}

TEST_CASE("deltas agrees with enumerated differences") {
  std::mt19937 rng(20240903);
  for (int iter = 0; iter < 100; ++iter) {
    std::uniform_int_distribution<int> dimCount(1, 2);
    std::uniform_int_distribution<int> coeff(-2, 2);
    std::uniform_int_distribution<int> cst(-6, 6);
    int n = dimCount(rng);
    Space sp;
    for (int i = 0; i < n; ++i)
      sp.dims.push_back("s" + std::to_string(i));
    for (int i = 0; i < n; ++i)
      sp.dims.push_back("t" + std::to_string(i));
    IntSet s = IntSet::universe(sp);
    for (const auto &d : sp.dims) {
      s = s.withConstraint(CmpKind::Ge, v(d) + 6);
      s = s.withConstraint(CmpKind::Ge, -v(d) + 6);
    }
    for (int c = 0; c < 2; ++c) {
      AffineExpr e;
      for (const auto &d : sp.dims)
        e += v(d) * coeff(rng);
      e += AffineExpr(cst(rng));
      s = s.withConstraint(CmpKind::Ge, e);
    }
    IntRel r(s, static_cast<size_t>(n));
    IntSet d = deltas(r);

    std::set<testsupport::Point> expect;
    for (const auto &p : pointsIn(s, -6, 6)) {
      testsupport::Point diff;
      for (int i = 0; i < n; ++i)
        diff.push_back(p[n + i] - p[i]);
      expect.insert(diff);
    }
    std::set<testsupport::Point> got = pointsIn(d, -12, 12);
    CAPTURE(iter);
    CAPTURE(s.str());
    CHECK(expect == got);
  }
}

TEST_CASE("operations are pure") {
  IntSet s = setOf({"i", "j"}, {"n"},
                   {{CmpKind::Ge, v("i")},
                    {CmpKind::Ge, v("n") - v("i") - v("j")},
                    {CmpKind::Ge, v("j") * 2 - 3}});
  IntSet p1 = projectOnto(s, {"i"});
  IntSet p2 = projectOnto(s, {"i"});
  CHECK(p1 == p2);
  CHECK(isEmptyInt(s) == isEmptyInt(s));
}

TEST_CASE("samplePoint returns members") {
  IntSet s = setOf({"di", "dj"}, {"n"},
                   {{CmpKind::Eq, v("di")},
                    {CmpKind::Ge, v("dj") - 1},
                    {CmpKind::Ge, v("n") - v("dj")}});
  EmptinessOptions floors;
  floors.paramFloors["n"] = 2;
  auto pt = samplePoint(s, floors);
  REQUIRE(pt.has_value());
  CHECK((*pt)["di"] == 0);
  CHECK((*pt)["dj"] >= 1);
  CHECK(s.contains(*pt));

  auto none = samplePoint(
      setOf({"i"}, {}, {{CmpKind::Ge, v("i")}, {CmpKind::Ge, -v("i") - 1}}));
  CHECK_FALSE(none.has_value());
}
