#include "obstruct/acceptance.hpp"

#include <atomic>
#include <chrono>
#include <functional>
#include <iomanip>
#include <random>
#include <sstream>
#include <thread>

#include "obstruct/groupcohom.hpp"
#include "obstruct/localise.hpp"

namespace obstruct {

namespace {

/// Collects failed checks and a short summary.
class Record {
  public:
    void check(bool ok, std::string const& what) {
        if (!ok)
            failures_.push_back(what);
    }
    void note(std::string const& s) { notes_.push_back(s); }
    bool ok() const { return failures_.empty(); }
    std::string detail() const {
        std::ostringstream os;
        if (!failures_.empty()) {
            os << "failed: " << failures_.front();
            if (failures_.size() > 1)
                os << " (+" << failures_.size() - 1 << " more)";
            return os.str();
        }
        for (std::size_t i = 0; i < notes_.size(); ++i)
            os << (i ? "; " : "") << notes_[i];
        return os.str();
    }

  private:
    std::vector<std::string> failures_, notes_;
};

struct Criterion {
    int id;
    std::string name;
    double limit;
    std::function<void(Record&)> run;
};

std::shared_ptr<PresentedAlgebra> truncated_ring(std::uint32_t p, int window) {
    AlgebraSpec s;
    s.characteristic = p;
    s.generators = {{"X", 1}, {"Y", 2}};
    s.relations = {{"X^2", "0"}};
    s.window = window;
    return std::make_shared<PresentedAlgebra>(s);
}

Vec random_vec(PrimeField const& f, std::size_t n, std::mt19937_64& rng) {
    Vec v(n);
    for (auto& x : v)
        x = f.from_int(static_cast<long long>(rng() % f.characteristic()));
    return v;
}

HochschildCochain random_cochain(std::shared_ptr<CochainContext const> ctx, int arity, int degree, int window,
                                 std::mt19937_64& rng) {
    HochschildCochain c(ctx, arity, degree);
    for (auto const& t : window_tuples(*ctx, arity, window, false))
        c.set(t, random_vec(ctx->field(), c.value_dim(t), rng));
    return c;
}

HochschildCochain random_cocycle(std::shared_ptr<CochainContext const> ctx, int arity, int degree, int window,
                                 std::mt19937_64& rng) {
    auto basis = cocycle_basis(ctx, arity, degree, window, false);
    auto const& f = ctx->field();
    HochschildCochain c(ctx, arity, degree);
    for (auto const& b : basis)
        c = c + b.scaled(f.from_int(static_cast<long long>(rng() % f.characteristic())));
    return c;
}

std::string verdict_name(ObstructionVerdict const& v) { return to_string(v.kind); }

void delta_squared(Record& rec) {
    std::mt19937_64 rng(1);
    auto r = truncated_ring(3, 10);
    auto ctx = std::make_shared<HochschildContext>(r);
    int count = 0;
    for (int i = 0; i < 500; ++i) {
        int arity = i % 4;
        int degree = static_cast<int>(rng() % 5) - 2;
        auto g = random_cochain(ctx, arity, degree, 8, rng);
        auto dd = delta(delta(g, 8), 8);
        rec.check(dd.is_zero(), "delta^2 != 0 for arity " + std::to_string(arity));
        ++count;
    }
    rec.note(std::to_string(count) + " cochains, arities 0..3, window 8");
}

void end_dga_laws(Record& rec) {
    for (auto [p, n] : {std::pair{2u, 1}, std::pair{2u, 2}, std::pair{3u, 1}, std::pair{3u, 2}, std::pair{5u, 1}}) {
        auto g = CyclicGroupData::make(p, n);
        auto e = end_dga(g, 8);
        auto tag = g.name();
        rec.check(check_d_squared(*e, -8, 8).empty(), tag + ": d^2");
        rec.check(check_leibniz(*e, -8, 8).empty(), tag + ": Leibniz");
        rec.check(check_dga_associativity(*e, -8, 8).empty(), tag + ": associativity");
        rec.check(check_unit(*e, 8).empty(), tag + ": unit");
    }
    rec.note("5 groups, degrees [-8, 8]");
}

void cohomology_of_end(Record& rec) {
    auto g = CyclicGroupData::of_order(3);
    auto tr = cyclic_transfer(g, 8);
    auto const& h = tr->cohomology();
    auto const& e = tr->source();
    for (int d = 0; d <= 8; ++d)
        rec.check(h.dim(d) == 1, "dim H^" + std::to_string(d) + " != 1");
    rec.check(tr->product_defects(8).empty(), "products differ from k[X,Y]/(X^2)");
    auto const& l = *tr->cohomology_algebra();
    auto x = find_label(l, "X", 1, 1);
    auto y = find_label(l, "Y", 2, 2);
    if (!x || !y) {
        rec.check(false, "generators X, Y not found");
        return;
    }
    auto fx = tr->f1(*x), fy = tr->f1(*y);
    rec.check(vec_is_zero(h.project(2, e.multiply(1, fx, 1, fx))), "X^2 != 0 in H*(End)");
    rec.check(h.project(3, e.multiply(1, fx, 2, fy)) == h.project(3, e.multiply(2, fy, 1, fx)),
              "XY != YX in H*(End)");
    rec.check(vec_is_zero(l.multiply_basis(*x, *x)), "X^2 != 0");
    rec.check(l.multiply_basis(*x, *y) == l.multiply_basis(*y, *x), "XY != YX");
    rec.note("dim 1 in degrees 0..8, X^2 = 0, XY = YX");
}

void m3_table(Record& rec) {
    auto mu = mu_G(CyclicGroupData::of_order(3), 8);
    rec.check(verify_m3_cocycle(mu.m3, 12), "m3 is not a cocycle");
    auto table = m3_table_z3(mu.context, 12);
    auto diff = mu.m3 - table;
    auto v = coboundary_decide(diff, 8);
    rec.check(v.trivial(), "m3 - table is not a coboundary at window 8");
    if (v.witness)
        rec.check(differences(delta(*v.witness, 8), diff, 8).empty(), "witness fails at window 8");
    auto s12 = solve_coboundary(diff, 12);
    rec.check(s12.witness.has_value(), "m3 - table is not a coboundary at window 12");
    if (s12.witness)
        rec.check(differences(delta(*s12.witness, 12), diff, 12).empty(), "witness fails at window 12");
    rec.note("witness verified at windows 8 and 12");
}

void class_verdicts(Record& rec) {
    std::ostringstream os;
    for (auto order : {3, 2, 4, 9, 5, 7}) {
        auto mu = mu_G(CyclicGroupData::of_order(order), 8);
        bool want_nontrivial = order == 3;
        rec.check(mu.verdict.trivial() != want_nontrivial, "cyclic:" + std::to_string(order));
        if (!want_nontrivial)
            rec.check(mu.verdict.windows == std::vector<int>{8, 12}, "cyclic:" + std::to_string(order) + " windows");
        os << (order == 3 ? "" : ", ") << order << " " << verdict_name(mu.verdict);
    }
    rec.note(os.str());
}

void kunneth(Record& rec) {
    auto z2 = CyclicGroupData::of_order(2);
    auto two = mu_product({z2, z2}, 8);
    rec.check(two.verdict.trivial(), "(Z/2)^2");
    auto three = mu_product({z2, z2, z2}, 6);
    rec.check(three.verdict.trivial(), "(Z/2)^3");
    rec.note("(Z/2)^2 windows 8,12 " + verdict_name(two.verdict) + "; (Z/2)^3 windows 6,10 " +
             verdict_name(three.verdict));
}

void tate(Record& rec) {
    auto z3 = mu_G_tate(CyclicGroupData::of_order(3), 4);
    auto const& t = dynamic_cast<HochschildContext const&>(*z3.context).values();
    rec.check(t.window_lo() == -8 && t.window_hi() == 8, "Laurent window is not [-8, 8]");
    rec.check(z3.verdict.kind == ObstructionVerdict::Kind::Nontrivial, "Gamma(mu_Z/3)");
    auto z3b = mu_G_tate(CyclicGroupData::of_order(3), 8);
    rec.check(z3b.verdict.kind == ObstructionVerdict::Kind::Nontrivial, "Gamma(mu_Z/3) at window 8");
    auto z9 = mu_G_tate(CyclicGroupData::of_order(9), 4);
    rec.check(z9.verdict.trivial(), "Gamma(mu_Z/9)");
    rec.note("Z/3 " + verdict_name(z3.verdict) + ", Z/9 " + verdict_name(z9.verdict) + " on [-8, 8]");
}

struct Z3Data {
    std::shared_ptr<PresentedAlgebra const> ring;
    HochschildCochain mu;
};

Z3Data z3_data(int window) {
    auto tr = cyclic_transfer(CyclicGroupData::of_order(3), window + 4);
    auto r = std::dynamic_pointer_cast<PresentedAlgebra const>(tr->cohomology_algebra());
    auto ctx = std::make_shared<HochschildContext>(r);
    return {r, tr->m3_cochain(ctx, window + 4)};
}

void realisability(Record& rec) {
    int w = 8;
    auto [r, mu] = z3_data(w);
    auto free = realisability_verdict(free_module(r), mu, w);
    rec.check(free.verdict.trivial(), "kappa(free) not trivial");
    rec.check(free.verdict.witness && free.verdict.witness->is_zero(), "kappa(free) witness not zero");
    auto x = cyclic_quotient(r, 1, r->parse_element("X", 1).second);
    auto kx = realisability_verdict(x, mu, w);
    rec.check(kx.verdict.kind == ObstructionVerdict::Kind::Nontrivial, "kappa(Lambda/X) not NONTRIVIAL");
    auto sum = direct_sum(x, free_module(r));
    rec.check(realisability_verdict(sum, mu, w).verdict.kind == kx.verdict.kind, "additivity");
    rec.check(realisability_verdict(sum, mu, w, false).verdict.kind == kx.verdict.kind,
              "additivity without splitting");
    rec.note("free " + verdict_name(free.verdict) + ", Lambda/X " + verdict_name(kx.verdict));
}

ModulePresentation random_module(std::shared_ptr<PresentedAlgebra const> r, std::mt19937_64& rng) {
    ModulePresentation m;
    m.algebra = r;
    auto ngens = 1 + rng() % 3;
    int top = 0;
    for (std::size_t i = 0; i < ngens; ++i) {
        int d = static_cast<int>(rng() % 3);
        top = std::max(top, d);
        m.generators.push_back({"e" + std::to_string(i), d});
    }
    auto nrels = rng() % 3;
    for (std::size_t k = 0; k < nrels; ++k) {
        ModulePresentation::Relation rel;
        rel.degree = top + static_cast<int>(rng() % 3);
        for (auto const& g : m.generators) {
            auto dim = r->dim_or_zero(rel.degree - g.degree);
            rel.coeffs.push_back(dim ? random_vec(r->field(), dim, rng) : Vec{});
        }
        m.relations.push_back(std::move(rel));
    }
    m.validate();
    return m;
}

void local_global(Record& rec) {
    int w = 6;
    auto [r, mu] = z3_data(w);
    auto x = cyclic_quotient(r, 1, r->parse_element("X", 1).second);
    auto report = local_global_check(x, mu, w);
    rec.check(report.rows.size() == 2, "expected the primes (X) and (X, Y)");
    for (auto const& row : report.rows)
        rec.check(row.result.verdict.kind == ObstructionVerdict::Kind::Nontrivial,
                  "Lambda/X at " + row.prime.label());
    std::mt19937_64 rng(9);
    int trivial = 0;
    for (int i = 0; i < 20; ++i) {
        auto m = random_module(r, rng);
        auto rep = local_global_check(m, mu, w);
        rec.check(rep.consistent(), "random module " + std::to_string(i));
        trivial += rep.global.verdict.trivial() ? 1 : 0;
    }
    rec.note("Lambda/X NONTRIVIAL at (X), (X, Y); 20 random modules consistent, " + std::to_string(trivial) +
             " globally trivial");
}

void products(Record& rec) {
    std::mt19937_64 rng(10);
    auto r = truncated_ring(3, 10);
    auto ctx = std::make_shared<HochschildContext>(r);
    auto const& f = r->field();
    int pairs = 0, tuples = 0, nonzero = 0;
    while (pairs < 100) {
        int m = static_cast<int>(rng() % 3), n = static_cast<int>(rng() % 3);
        int i = static_cast<int>(rng() % 3) - 1, j = static_cast<int>(rng() % 3) - 1;
        auto zeta = random_cocycle(ctx, m, i, 4, rng);
        auto eta = random_cocycle(ctx, n, j, 4, rng);
        for (auto const& t : bar_tuples(*r, m + n, 4)) {
            auto c = cup_tilde(zeta, eta, t);
            rec.check(yoneda_diagonal(zeta, eta, t) == c, "yoneda(zeta, eta) != cup");
            rec.check(yoneda_shift(eta, zeta, t) == vec_scale(f, f.sign(static_cast<long long>(m) * n + i * j), c),
                      "yoneda(eta, zeta) != sign * cup");
            ++tuples;
            nonzero += vec_is_zero(c) ? 0 : 1;
        }
        ++pairs;
    }
    rec.note(std::to_string(pairs) + " cocycle pairs, " + std::to_string(tuples) + " tuples (" +
             std::to_string(nonzero) + " nonzero)");
}

void choice_robustness(Record& rec) {
    auto tr = cyclic_transfer(CyclicGroupData::of_order(3), 12);
    auto ctx = std::make_shared<HochschildContext>(tr->cohomology_algebra());
    auto m3 = tr->m3_cochain(ctx, 12);
    int changed = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto p = perturbed_transfer(*tr, seed);
        rec.check(p->homotopy_defects(12).empty(), "perturbed homotopy, seed " + std::to_string(seed));
        auto m3p = p->m3_cochain(ctx, 12);
        rec.check(verify_m3_cocycle(m3p, 12), "perturbed m3 not a cocycle");
        auto diff = m3p - m3;
        changed += diff.is_zero() ? 0 : 1;
        auto v = coboundary_decide(diff, 8);
        rec.check(v.trivial(), "m3' - m3 not a coboundary, seed " + std::to_string(seed));
        if (v.witness)
            rec.check(differences(delta(*v.witness, 8), diff, 8).empty(), "witness fails");
    }
    rec.note("5 seeds, " + std::to_string(changed) + " changed m3 pointwise, all differences coboundaries");
}

void pullback(Record& rec) {
    PrimeField f(7);
    auto y = std::make_shared<FreeComplex>(vector_space_complex(
        f, 0, {FpMatrix(f, {{1}, {0}}), FpMatrix(f, {{0, 1}, {0, 0}}), FpMatrix(f, {{0, 1}})}, {1, 2, 2, 1}));
    auto cone = std::make_shared<FreeComplex>(vector_space_complex(f, 0, {FpMatrix(f, {{1}})}, {1, 1}));
    auto sum = std::make_shared<FreeComplex>(direct_sum(*y, *cone));
    rec.check(y->check_d_squared().empty() && sum->check_d_squared().empty(), "d^2");
    EndDga a(y), b(sum);
    HomComplex m(y, sum);
    ChainMap alpha{&a, &m, 0, {}}, beta{&b, &m, 0, {}};
    for (int n = a.window_lo(); n <= a.window_hi(); ++n) {
        FpMatrix blk(f, m.degree_dim(n), a.dim(n));
        for (std::uint32_t i = 0; i < a.dim(n); ++i)
            blk(*m.encode(n, a.hom().decode({n, i})), i) = 1;
        alpha.blocks.emplace(n, std::move(blk));
    }
    for (int n = b.window_lo(); n <= b.window_hi(); ++n) {
        FpMatrix blk(f, m.degree_dim(n), b.dim(n));
        for (std::uint32_t i = 0; i < b.dim(n); ++i) {
            auto e = b.hom().decode({n, i});
            if (e.col >= y->rank(e.source))
                continue;
            if (auto idx = m.encode(n, e))
                blk(*idx, i) = 1;
        }
        rec.check(rank(blk) == m.degree_dim(n), "beta not surjective in degree " + std::to_string(n));
        beta.blocks.emplace(n, std::move(blk));
    }
    int lo = b.window_lo(), hi = b.window_hi();
    rec.check(chain_map_defects(alpha, lo, hi).empty() && chain_map_defects(beta, lo, hi).empty(),
              "alpha, beta are not chain maps");
    rec.check(quasi_iso_check(beta, lo, hi), "beta is not a quasi-isomorphism");
    auto pb = pullback_dga(a, b, m, alpha, beta);
    auto const& x = *pb.algebra;
    rec.check(check_d_squared(x, lo, hi).empty(), "pullback d^2");
    rec.check(check_leibniz(x, lo, hi).empty(), "pullback Leibniz");
    rec.check(check_dga_associativity(x, lo, hi).empty(), "pullback associativity");
    rec.check(chain_map_defects(pb.p1, lo, hi).empty() && dga_map_defects(pb.p1, x, a, lo, hi).empty(),
              "p1 is not a dg map");
    rec.check(chain_map_defects(pb.p2, lo, hi).empty() && dga_map_defects(pb.p2, x, b, lo, hi).empty(),
              "p2 is not a dg map");
    rec.check(cohomology_pullback_check(pb, a, b, m, alpha, beta, lo, hi), "H* is not the pullback");
    rec.check(quasi_iso_check(pb.p1, lo, hi), "p1 is not a quasi-isomorphism");
    rec.note("Y of dims 1,2,2,1 plus an acyclic cone, degrees [" + std::to_string(lo) + ", " + std::to_string(hi) +
             "]");
}

std::vector<Criterion> const& criteria() {
    static std::vector<Criterion> const all{
        {1, "delta^2 = 0 on random Hochschild cochains", 5, delta_squared},
        {2, "Leibniz and associativity for End of periodic resolutions", 10, end_dga_laws},
        {3, "H*(End) of cyclic:3 is k[X,Y]/(X^2)", 30, cohomology_of_end},
        {4, "m3 of cyclic:3 matches the table up to a coboundary", 30, m3_table},
        {5, "class verdicts for cyclic groups", 60, class_verdicts},
        {6, "Kunneth products of Z/2", 60, kunneth},
        {7, "Tate images Gamma(mu)", 60, tate},
        {8, "realisability obstruction kappa", 30, realisability},
        {9, "local-global consistency", 60, local_global},
        {10, "Yoneda products agree with cup products", 30, products},
        {11, "m3 is independent of the cycle selection", 60, choice_robustness},
        {12, "pullback along a surjective quasi-isomorphism", 5, pullback},
    };
    return all;
}

CriterionResult run_one(Criterion const& c) {
    CriterionResult out;
    out.id = c.id;
    out.name = c.name;
    out.limit = c.limit;
    Record rec;
    auto start = std::chrono::steady_clock::now();
    try {
        c.run(rec);
    } catch (std::exception const& e) {
        rec.check(false, std::string("exception: ") + e.what());
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.detail = rec.detail();
    out.pass = rec.ok() && out.seconds <= out.limit;
    if (rec.ok() && !out.pass)
        out.detail = "time limit exceeded; " + out.detail;
    return out;
}

} // namespace

int acceptance_count() { return static_cast<int>(criteria().size()); }

std::vector<CriterionResult> run_acceptance(int jobs, std::vector<int> const& only) {
    std::vector<Criterion const*> selected;
    for (auto const& c : criteria())
        if (only.empty() || std::find(only.begin(), only.end(), c.id) != only.end())
            selected.push_back(&c);
    for (int id : only)
        if (id < 1 || id > acceptance_count())
            throw InvalidInput("unknown acceptance criterion " + std::to_string(id));
    std::vector<CriterionResult> results(selected.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < selected.size(); i = next++)
            results[i] = run_one(*selected[i]);
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < std::max(jobs, 1); ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();
    return results;
}

std::string format_acceptance(std::vector<CriterionResult> const& results) {
    std::ostringstream os;
    int passed = 0;
    for (auto const& r : results) {
        passed += r.pass ? 1 : 0;
        os << (r.pass ? "[PASS] " : "[FAIL] ") << std::setw(2) << r.id << "  " << r.name << "  (" << std::fixed
           << std::setprecision(2) << r.seconds << " s / " << std::setprecision(0) << r.limit << " s)  "
           << r.detail << "\n";
    }
    os << passed << "/" << results.size() << " criteria passed\n";
    return os.str();
}

nlohmann::json acceptance_to_json(std::vector<CriterionResult> const& results) {
    auto arr = nlohmann::json::array();
    for (auto const& r : results)
        arr.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}, {"limit", r.limit}});
    return arr;
}

} // namespace obstruct
