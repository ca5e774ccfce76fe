//===-- test_frontend.cpp - Parser and directive model tests ---------------===//

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polyrace/Directive.h"
#include "polyrace/Parser.h"

using namespace polyrace;

namespace {

const char *kMissingPrivate = R"(param len;
double u[len][len];
double temp, sum;
int i, j;

#pragma omp parallel for private(temp, i, j)
for (i = 0; i < len; i++)
  for (j = 0; j < len; j++) {
    temp = u[i][j];
    sum = sum + temp * temp;
  }
)";

const char *kSimdForward = R"(param len;
double a[len], b[len];

#pragma omp simd
for (int i = 0; i < len - 1; i++) {
  a[i + 1] = a[i] + b[i];
}
)";

const char *kNowaitSingle = R"(param len;
double a[len];
double b, error;
int i;

#pragma omp parallel shared(b, error)
{
#pragma omp for nowait
  for (i = 0; i < len; i++)
    a[i] = b + a[i] * 5;
#pragma omp single
  error = a[9] + 1;
}
)";

std::optional<VarClause> classOf(const Directive &root, const std::string &n) {
  auto m = classMapOf(root);
  auto it = m.find(n);
  if (it == m.end())
    return std::nullopt;
  return it->second;
}

} // namespace

TEST_CASE("worksharing kernel with missing private clause") {
  Program p = parse(kMissingPrivate, "drb021.c");
  REQUIRE(p.params == std::vector<std::string>{"len"});
  REQUIRE(p.arrays.size() == 1);
  CHECK(p.arrays[0].extents.size() == 2);

  auto dirs = extractDirectives(p);
  REQUIRE(dirs.size() == 1);
  const Directive &par = *dirs[0];
  CHECK(par.dtype == Dtype::Parallel);
  REQUIRE(par.children.size() == 1);
  CHECK(par.children[0]->dtype == Dtype::WorkshareLoop);

  // explicit privates kept, sum defaulted to shared
  CHECK(classOf(par, "temp")->vtype == Vtype::Private);
  CHECK(classOf(par, "i")->vtype == Vtype::Private);
  CHECK(classOf(par, "j")->vtype == Vtype::Private);
  CHECK(classOf(par, "sum")->vtype == Vtype::Shared);
  CHECK(classOf(par, "u")->vtype == Vtype::Shared);
  CHECK(classOf(par, "len")->vtype == Vtype::Shared);
}

TEST_CASE("pragma-free loop yields no directives") {
  Program p = parse("for (i = 0; i < n; i++) ;\n");
  CHECK(p.isParam("n")); // implicit symbolic parameter
  auto dirs = extractDirectives(p);
  CHECK(dirs.empty());
  REQUIRE(p.body.size() == 1);
  CHECK(p.body[0]->kind == Stmt::Kind::For);
}

TEST_CASE("simd directive attaches to its loop") {
  Program p = parse(kSimdForward, "drb024.c");
  auto dirs = extractDirectives(p);
  REQUIRE(dirs.size() == 1);
  CHECK(dirs[0]->dtype == Dtype::Simd);
  CHECK(dirs[0]->collapse == 1);
  REQUIRE(dirs[0]->body != nullptr);
  CHECK(dirs[0]->body->kind == Stmt::Kind::For);
  CHECK(classOf(*dirs[0], "a")->vtype == Vtype::Shared);
  CHECK(classOf(*dirs[0], "i")->vtype == Vtype::Private);
}

TEST_CASE("parallel region with nowait loop, single, and join barrier") {
  Program p = parse(kNowaitSingle, "drb013.c");
  auto dirs = extractDirectives(p);
  REQUIRE(dirs.size() == 1);
  const Directive &par = *dirs[0];
  CHECK(par.dtype == Dtype::Parallel);
  REQUIRE(par.children.size() == 3);
  CHECK(par.children[0]->dtype == Dtype::WorkshareLoop);
  CHECK(par.children[0]->nowait);
  CHECK(par.children[1]->dtype == Dtype::Single);
  CHECK(par.children[2]->dtype == Dtype::Barrier);
  CHECK(par.children[2]->implicit);
  // default static schedule on the worksharing loop
  REQUIRE(par.children[0]->sched.has_value());
  CHECK(par.children[0]->sched->stype == SchedKind::Static);
  CHECK_FALSE(par.children[0]->sched->chunk.has_value());
}

TEST_CASE("exhaustive clauses leave nothing shared") {
  Program p = parse(R"(param n;
double a[n];
double t;
#pragma omp parallel for private(t) shared(a)
for (int i = 0; i < n; i++)
  t = a[i];
)");
  auto dirs = extractDirectives(p);
  REQUIRE(dirs.size() == 1);
  int sharedScalars = 0;
  for (const auto &vc : dirs[0]->vars)
    if (vc.vtype == Vtype::Shared && vc.name != "a" && vc.name != "n")
      ++sharedScalars;
  CHECK(sharedScalars == 0);
}

TEST_CASE("schedule and reduction clauses are recorded") {
  Program p = parse(R"(param n;
double a[n];
double s;
#pragma omp parallel for reduction(+: s) schedule(monotonic: dynamic, 4) collapse(1) num_threads(8)
for (int i = 0; i < n; i++)
  s = s + a[i];
)");
  auto dirs = extractDirectives(p);
  REQUIRE(dirs.size() == 1);
  const Directive &par = *dirs[0];
  CHECK(par.numThreads == 8);
  auto cls = classOf(par, "s");
  REQUIRE(cls.has_value());
  CHECK(cls->vtype == Vtype::Reduction);
  CHECK(cls->reductionOp == "+");
  const Directive &loop = *par.children[0];
  REQUIRE(loop.sched.has_value());
  CHECK(loop.sched->stype == SchedKind::Dynamic);
  CHECK(loop.sched->chunk == 4);
  CHECK(loop.sched->modifier == SchedModifier::Monotonic);
}

TEST_CASE("unsupported pragmas are recorded, not rejected") {
  Program p = parse(R"(param n;
double a[n];
#pragma omp sections
{
  a[0] = 1;
}
#pragma omp task
a[1] = 2;
)");
  auto dirs = extractDirectives(p);
  REQUIRE(dirs.size() == 2);
  CHECK(dirs[0]->dtype == Dtype::Unknown);
  CHECK(dirs[0]->unknownName == "sections");
  CHECK(dirs[1]->dtype == Dtype::Unknown);
  CHECK(dirs[1]->unknownName == "task");
}

TEST_CASE("threadprivate is file-scope and standalone") {
  Program p = parse(R"(param n;
int counter;
double a[n];
#pragma omp threadprivate(counter)
#pragma omp parallel for
for (int i = 0; i < n; i++)
  counter = counter + 1;
)");
  auto dirs = extractDirectives(p);
  REQUIRE(dirs.size() == 2);
  CHECK(dirs[0]->dtype == Dtype::ThreadPrivate);
  CHECK(classOf(*dirs[1], "counter")->vtype == Vtype::ThreadPrivate);
}

TEST_CASE("frontend errors carry positions") {
  CHECK_THROWS_AS(parse("for (i = 0; j < n; i++) ;"), SyntaxError);
  CHECK_THROWS_AS(parse("x = 1;"), SemanticError);
  CHECK_THROWS_AS(parse("int x; x = foo(3);"), SyntaxError);
  CHECK_THROWS_AS(parse("double a[n]; a[0][0] = 1;"), SemanticError);
  CHECK_THROWS_AS(parse("param n; n = 3;"), SemanticError);
  CHECK_THROWS_AS(
      parse("for (i = 0; i < 5; i++) for (i = 0; i < 5; i++) ;"),
      SemanticError);
  CHECK_THROWS_AS(parse("#pragma omp parallel for\nx0 = 1;"), SemanticError);
  try {
    parse("int y;\ny = ;\n");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError &e) {
    CHECK(e.loc().line == 2);
  }
}

TEST_CASE("round trip: print then reparse is structurally identical") {
  const char *kernels[] = {kMissingPrivate, kSimdForward, kNowaitSingle};
  for (const char *k : kernels) {
    Program p1 = parse(k);
    std::string printed = printProgram(p1);
    CAPTURE(printed);
    Program p2 = parse(printed);
    CHECK(structurallyEqual(p1, p2));
  }
  // expressions with tricky associativity
  Program q1 = parse(R"(param n;
double a[n];
int x;
x = n - (n - 2) * 3 % 4;
a[x] = -(x + 1) / 2;
for (int i = 0; i < min(n, 2 * n - 3); i += 2)
  a[i] = max(a[i], a[i + 1]);
)");
  Program q2 = parse(printProgram(q1));
  CHECK(structurallyEqual(q1, q2));
}

TEST_CASE("default sharing totality on parallel regions") {
  Program p = parse(kMissingPrivate);
  auto dirs = extractDirectives(p);
  std::map<std::string, bool> names;
  std::vector<std::string> stack;
  collectVariables(*dirs[0]->body, stack, names);
  auto m = classMapOf(*dirs[0]);
  for (const auto &[n, isArray] : names)
    CHECK(m.count(n) == 1);
}
