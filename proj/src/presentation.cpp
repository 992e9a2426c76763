#include "obstruct/presentation.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace obstruct {

namespace {

constexpr int kMaxRewriteSteps = 100000;

struct Factor {
    std::string name;
    int exponent = 1;
};

struct Term {
    long long coeff = 1;
    std::vector<Factor> factors;
};

bool valid_name(std::string const& s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
        return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

long long parse_int(std::string const& s, std::string const& context) {
    if (s.empty())
        throw InvalidInput("expected an integer in '" + context + "'");
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (std::exception const&) {
        throw InvalidInput("bad integer '" + s + "' in '" + context + "'");
    }
    if (pos != s.size())
        throw InvalidInput("bad integer '" + s + "' in '" + context + "'");
    return v;
}

std::vector<Term> parse_terms(std::string const& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c)))
            s.push_back(c);
    if (s.empty())
        throw InvalidInput("empty algebra element");
    std::vector<Term> terms;
    std::size_t i = 0;
    while (i < s.size()) {
        int sign = 1;
        while (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            if (s[i] == '-')
                sign = -sign;
            ++i;
        }
        std::size_t j = i;
        while (j < s.size() && !((s[j] == '+' || s[j] == '-') && j > i && s[j - 1] != '^'))
            ++j;
        std::string body = s.substr(i, j - i);
        if (body.empty())
            throw InvalidInput("dangling sign in '" + raw + "'");
        Term t;
        t.coeff = sign;
        std::stringstream ss(body);
        std::string piece;
        while (std::getline(ss, piece, '*')) {
            if (piece.empty())
                throw InvalidInput("empty factor in '" + raw + "'");
            if (std::isdigit(static_cast<unsigned char>(piece[0]))) {
                t.coeff *= parse_int(piece, raw);
                continue;
            }
            Factor f;
            auto caret = piece.find('^');
            f.name = piece.substr(0, caret);
            if (caret != std::string::npos)
                f.exponent = static_cast<int>(parse_int(piece.substr(caret + 1), raw));
            if (!valid_name(f.name))
                throw InvalidInput("bad generator name '" + f.name + "' in '" + raw + "'");
            t.factors.push_back(f);
        }
        terms.push_back(std::move(t));
        i = j;
    }
    return terms;
}

bool odd(long long v) { return v % 2 != 0; }

} // namespace

AlgebraSpec algebra_spec_from_json(nlohmann::json const& j) {
    try {
        AlgebraSpec s;
        s.characteristic = j.at("char").get<std::uint32_t>();
        for (auto const& g : j.at("generators"))
            s.generators.push_back({g.at("name").get<std::string>(), g.at("degree").get<int>()});
        if (j.contains("relations"))
            for (auto const& r : j.at("relations")) {
                if (r.is_array() && r.size() == 2)
                    s.relations.emplace_back(r[0].get<std::string>(), r[1].get<std::string>());
                else if (r.is_object())
                    s.relations.emplace_back(r.at("lhs").get<std::string>(), r.at("rhs").get<std::string>());
                else
                    throw InvalidInput("relation must be a [lhs, rhs] pair");
            }
        s.graded_commutative = j.value("graded_commutative", true);
        s.window = j.value("window", 12);
        if (j.contains("invertible"))
            s.invertible = j.at("invertible").get<std::vector<std::string>>();
        return s;
    } catch (nlohmann::json::exception const& e) {
        throw InvalidInput(std::string("algebra presentation: ") + e.what());
    }
}

nlohmann::json algebra_spec_to_json(AlgebraSpec const& s) {
    nlohmann::json j;
    j["char"] = s.characteristic;
    j["generators"] = nlohmann::json::array();
    for (auto const& g : s.generators)
        j["generators"].push_back({{"name", g.name}, {"degree", g.degree}});
    j["relations"] = nlohmann::json::array();
    for (auto const& [l, r] : s.relations)
        j["relations"].push_back({l, r});
    j["graded_commutative"] = s.graded_commutative;
    j["window"] = s.window;
    if (!s.invertible.empty())
        j["invertible"] = s.invertible;
    return j;
}

PresentedAlgebra::PresentedAlgebra(AlgebraSpec spec) : spec_(std::move(spec)), field_(spec_.characteristic) {
    auto const& gens = spec_.generators;
    std::set<std::string> names;
    for (auto const& g : gens) {
        if (!valid_name(g.name))
            throw InvalidInput("bad generator name '" + g.name + "'");
        if (!names.insert(g.name).second)
            throw InvalidInput("duplicate generator '" + g.name + "'");
    }
    if (spec_.window < 0)
        throw InvalidInput("window must be non-negative");
    if (spec_.invertible.size() > 1)
        throw Unsupported("at most one invertible generator is supported");
    if (!spec_.invertible.empty()) {
        auto it = std::find_if(gens.begin(), gens.end(), [&](auto const& g) { return g.name == spec_.invertible[0]; });
        if (it == gens.end())
            throw InvalidInput("unknown invertible generator '" + spec_.invertible[0] + "'");
        invertible_ = static_cast<std::size_t>(it - gens.begin());
        if (!spec_.graded_commutative)
            throw Unsupported("invertible generators need a graded-commutative presentation");
        if (it->degree == 0)
            throw Unsupported("an invertible generator of degree 0 gives infinite-dimensional degrees");
        if (odd(it->degree) && field_.characteristic() != 2)
            throw Unsupported("odd-degree elements cannot be inverted outside characteristic 2");
    }
    lo_ = invertible_ ? -spec_.window : 0;
    hi_ = spec_.window;
    for (std::size_t g = 0; g < gens.size(); ++g) {
        if (invertible_ && *invertible_ == g)
            continue;
        if (gens[g].degree < 0)
            throw Unsupported("generators of negative degree are not supported");
        if (!spec_.graded_commutative && gens[g].degree == 0)
            throw Unsupported("degree-0 generators need a graded-commutative presentation");
    }

    for (auto const& [lhs_text, rhs_text] : spec_.relations) {
        RewriteRule rule;
        PrimeField::Elem lc = 1;
        rule.lhs = parse_monomial(lhs_text, lc);
        if (lc == 0)
            throw InvalidInput("relation left side '" + lhs_text + "' is zero");
        auto rhs_terms = parse_terms(rhs_text);
        bool rhs_zero = rhs_terms.size() == 1 && rhs_terms[0].factors.empty() && rhs_terms[0].coeff == 0;
        if (!rhs_zero) {
            if (rhs_terms.size() != 1)
                throw Unsupported("rewriting rules must have a single monomial on the right: '" + rhs_text + "'");
            PrimeField::Elem rc = 1;
            auto rhs = parse_monomial(rhs_text, rc);
            if (rc != 0) {
                if (degree_of(rhs) != degree_of(rule.lhs))
                    throw InvalidInput("relation '" + lhs_text + " = " + rhs_text + "' is not homogeneous");
                rule.rhs = rhs;
                rule.coeff = field_.div(rc, lc);
            }
        }
        rules_.push_back(std::move(rule));
    }

    exponent_bound_.assign(gens.size(), -1);
    if (spec_.graded_commutative) {
        for (std::size_t g = 0; g < gens.size(); ++g) {
            if (invertible_ && *invertible_ == g)
                continue;
            if (odd(gens[g].degree) && field_.characteristic() != 2)
                exponent_bound_[g] = 1;
            for (auto const& r : rules_) {
                bool pure = r.lhs[g] > 0;
                for (std::size_t h = 0; h < gens.size(); ++h)
                    if (h != g && r.lhs[h] != 0)
                        pure = false;
                if (pure) {
                    int b = r.lhs[g] - 1;
                    exponent_bound_[g] = exponent_bound_[g] < 0 ? b : std::min(exponent_bound_[g], b);
                }
            }
            if (exponent_bound_[g] < 0 && (gens[g].degree == 0 || invertible_))
                throw Unsupported("generator '" + gens[g].name +
                                  "' must be nilpotent by a pure-power relation for finite-dimensional degrees");
        }
    }
}

int PresentedAlgebra::degree_of(Monomial const& m) const {
    int d = 0;
    auto const& gens = spec_.generators;
    if (spec_.graded_commutative) {
        for (std::size_t g = 0; g < m.size(); ++g)
            d += m[g] * gens[g].degree;
    } else {
        for (int g : m)
            d += gens[static_cast<std::size_t>(g)].degree;
    }
    return d;
}

Monomial PresentedAlgebra::parse_monomial(std::string const& text, PrimeField::Elem& coeff) const {
    auto terms = parse_terms(text);
    if (terms.size() != 1)
        throw Unsupported("expected a single monomial, got '" + text + "'");
    auto const& gens = spec_.generators;
    coeff = field_.from_int(terms[0].coeff);
    Monomial m;
    if (spec_.graded_commutative)
        m.assign(gens.size(), 0);
    for (auto const& f : terms[0].factors) {
        auto it = std::find_if(gens.begin(), gens.end(), [&](auto const& g) { return g.name == f.name; });
        if (it == gens.end())
            throw InvalidInput("unknown generator '" + f.name + "' in '" + text + "'");
        auto g = static_cast<std::size_t>(it - gens.begin());
        if (f.exponent < 0 && !(invertible_ && *invertible_ == g))
            throw InvalidInput("negative power of non-invertible generator '" + f.name + "'");
        if (spec_.graded_commutative) {
            Monomial single(gens.size(), 0);
            single[g] = f.exponent;
            auto [s, prod] = mono_mul(m, single);
            coeff = field_.mul(coeff, s);
            m = std::move(prod);
        } else {
            for (int e = 0; e < f.exponent; ++e)
                m.push_back(static_cast<int>(g));
        }
    }
    return m;
}

std::pair<PrimeField::Elem, Monomial> PresentedAlgebra::mono_mul(Monomial const& a, Monomial const& b) const {
    if (!spec_.graded_commutative) {
        Monomial w = a;
        w.insert(w.end(), b.begin(), b.end());
        return {1, w};
    }
    auto const& gens = spec_.generators;
    long long parity = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!odd(a[i]) || !odd(gens[i].degree))
            continue;
        for (std::size_t j = 0; j < i; ++j)
            if (odd(b[j]) && odd(gens[j].degree))
                ++parity;
    }
    Monomial m(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        m[i] = a[i] + b[i];
    return {field_.sign(parity), m};
}

bool PresentedAlgebra::divides(Monomial const& lhs, Monomial const& m) const {
    if (spec_.graded_commutative) {
        for (std::size_t g = 0; g < m.size(); ++g) {
            if (invertible_ && *invertible_ == g)
                continue;
            if (m[g] < lhs[g])
                return false;
        }
        return true;
    }
    return std::search(m.begin(), m.end(), lhs.begin(), lhs.end()) != m.end() || lhs.empty();
}

std::optional<std::size_t> PresentedAlgebra::first_applicable(Monomial const& m) const {
    for (std::size_t r = 0; r < rules_.size(); ++r)
        if (divides(rules_[r].lhs, m))
            return r;
    return std::nullopt;
}

std::optional<std::pair<PrimeField::Elem, Monomial>> PresentedAlgebra::rewrite_once(Monomial const& m,
                                                                                     std::size_t r) const {
    auto const& rule = rules_[r];
    if (!rule.rhs)
        return std::nullopt;
    if (spec_.graded_commutative) {
        Monomial q(m.size());
        for (std::size_t g = 0; g < m.size(); ++g)
            q[g] = m[g] - rule.lhs[g];
        auto s1 = mono_mul(rule.lhs, q).first;
        auto [s2, out] = mono_mul(*rule.rhs, q);
        return std::make_pair(field_.mul(rule.coeff, field_.mul(s1, s2)), out);
    }
    auto it = std::search(m.begin(), m.end(), rule.lhs.begin(), rule.lhs.end());
    Monomial out(m.begin(), it);
    out.insert(out.end(), rule.rhs->begin(), rule.rhs->end());
    out.insert(out.end(), it + static_cast<std::ptrdiff_t>(rule.lhs.size()), m.end());
    return std::make_pair(rule.coeff, out);
}

std::optional<std::pair<PrimeField::Elem, Monomial>> PresentedAlgebra::normal_form(Monomial const& m) const {
    {
        std::lock_guard lock(mu_);
        auto it = nf_cache_.find(m);
        if (it != nf_cache_.end())
            return it->second;
    }
    std::optional<std::pair<PrimeField::Elem, Monomial>> result = std::make_pair(PrimeField::Elem{1}, m);
    auto const& gens = spec_.generators;
    bool odd_squares_vanish = spec_.graded_commutative && field_.characteristic() != 2;
    for (int step = 0;; ++step) {
        if (step > kMaxRewriteSteps)
            throw InvalidInput("rewriting system does not terminate");
        auto& cur = result->second;
        if (odd_squares_vanish) {
            bool vanish = false;
            for (std::size_t g = 0; g < gens.size(); ++g)
                if (odd(gens[g].degree) && cur[g] >= 2)
                    vanish = true;
            if (vanish) {
                result.reset();
                break;
            }
        }
        auto r = first_applicable(cur);
        if (!r)
            break;
        auto next = rewrite_once(cur, *r);
        if (!next) {
            result.reset();
            break;
        }
        result = std::make_pair(field_.mul(result->first, next->first), next->second);
    }
    std::lock_guard lock(mu_);
    nf_cache_.emplace(m, result);
    return result;
}

void PresentedAlgebra::enumerate(int d, DegreeBasis& out) const {
    auto const& gens = spec_.generators;
    std::vector<Monomial> found;
    if (spec_.graded_commutative) {
        Monomial cur(gens.size(), 0);
        auto rec = [&](auto&& self, std::size_t g, int rem) -> void {
            if (g == gens.size()) {
                if (invertible_) {
                    int e = gens[*invertible_].degree;
                    if (rem % e != 0)
                        return;
                    cur[*invertible_] = rem / e;
                } else if (rem != 0) {
                    return;
                }
                auto nf = normal_form(cur);
                if (!nf || nf->second != cur)
                    return;
                found.push_back(cur);
                return;
            }
            if (invertible_ && *invertible_ == g) {
                self(self, g + 1, rem);
                return;
            }
            int deg = gens[g].degree;
            int bound = exponent_bound_[g];
            int max_e = bound;
            if (!invertible_ && deg > 0) {
                if (rem < 0)
                    return;
                max_e = bound < 0 ? rem / deg : std::min(bound, rem / deg);
            }
            for (int e = 0; e <= max_e; ++e) {
                cur[g] = e;
                self(self, g + 1, rem - e * deg);
            }
            cur[g] = 0;
        };
        rec(rec, 0, d);
        std::sort(found.begin(), found.end(), std::greater<>());
    } else {
        if (d < 0)
            return;
        Monomial cur;
        auto rec = [&](auto&& self, int rem) -> void {
            if (rem == 0) {
                found.push_back(cur);
                return;
            }
            for (std::size_t g = 0; g < gens.size(); ++g) {
                if (gens[g].degree > rem)
                    continue;
                cur.push_back(static_cast<int>(g));
                bool reducible = false;
                for (auto const& r : rules_)
                    if (r.lhs.size() <= cur.size() &&
                        std::equal(r.lhs.begin(), r.lhs.end(), cur.end() - static_cast<std::ptrdiff_t>(r.lhs.size())))
                        reducible = true;
                if (!reducible)
                    self(self, rem - gens[g].degree);
                cur.pop_back();
            }
        };
        rec(rec, d);
    }
    out.monomials = std::move(found);
    for (std::uint32_t i = 0; i < out.monomials.size(); ++i)
        out.index.emplace(out.monomials[i], i);
}

PresentedAlgebra::DegreeBasis const& PresentedAlgebra::basis(int d) const {
    require_window(d, "presented algebra");
    {
        std::lock_guard lock(mu_);
        auto it = bases_.find(d);
        if (it != bases_.end())
            return *it->second;
    }
    auto b = std::make_unique<DegreeBasis>();
    enumerate(d, *b);
    std::lock_guard lock(mu_);
    auto [it, inserted] = bases_.emplace(d, std::move(b));
    return *it->second;
}

std::size_t PresentedAlgebra::dim(int d) const { return basis(d).monomials.size(); }

Monomial const& PresentedAlgebra::monomial(BasisRef a) const { return basis(a.deg).monomials.at(a.idx); }

std::optional<BasisRef> PresentedAlgebra::find(Monomial const& m) const {
    int d = degree_of(m);
    auto const& b = basis(d);
    auto it = b.index.find(m);
    if (it == b.index.end())
        return std::nullopt;
    return BasisRef{d, it->second};
}

Vec PresentedAlgebra::monomial_vector(Monomial const& m) const {
    int d = degree_of(m);
    Vec out = zero_vec(field_, dim(d));
    auto nf = normal_form(m);
    if (nf)
        out[basis(d).index.at(nf->second)] = nf->first;
    return out;
}

Monomial PresentedAlgebra::generator_power(std::size_t g, int e) const {
    if (spec_.graded_commutative) {
        Monomial m(spec_.generators.size(), 0);
        m.at(g) = e;
        return m;
    }
    if (e < 0)
        throw InvalidInput("negative power in a free presentation");
    return Monomial(static_cast<std::size_t>(e), static_cast<int>(g));
}

Vec PresentedAlgebra::multiply_basis(BasisRef a, BasisRef b) const {
    require_window(a.deg + b.deg, "multiply");
    Vec out = zero_vec(field_, dim(a.deg + b.deg));
    accumulate_product(a, b, 1, out);
    return out;
}

void PresentedAlgebra::accumulate_product(BasisRef a, BasisRef b, PrimeField::Elem c, Vec& out) const {
    require_window(a.deg + b.deg, "multiply");
    auto [s, m] = mono_mul(monomial(a), monomial(b));
    auto nf = normal_form(m);
    if (!nf)
        return;
    auto idx = basis(a.deg + b.deg).index.at(nf->second);
    out[idx] = field_.add(out[idx], field_.mul(c, field_.mul(s, nf->first)));
}

std::string PresentedAlgebra::label(BasisRef a) const {
    auto const& m = monomial(a);
    auto const& gens = spec_.generators;
    std::vector<std::string> parts;
    auto emit = [&](std::size_t g, int e) {
        parts.push_back(e == 1 ? gens[g].name : gens[g].name + "^" + std::to_string(e));
    };
    if (spec_.graded_commutative) {
        for (std::size_t g = 0; g < m.size(); ++g)
            if (m[g] != 0)
                emit(g, m[g]);
    } else {
        for (std::size_t i = 0; i < m.size();) {
            std::size_t j = i;
            while (j < m.size() && m[j] == m[i])
                ++j;
            emit(static_cast<std::size_t>(m[i]), static_cast<int>(j - i));
            i = j;
        }
    }
    if (parts.empty())
        return "1";
    std::string s = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i)
        s += "*" + parts[i];
    return s;
}

std::optional<std::uint32_t> PresentedAlgebra::unit_index() const {
    Monomial one = spec_.graded_commutative ? Monomial(spec_.generators.size(), 0) : Monomial{};
    auto const& b = basis(0);
    auto it = b.index.find(one);
    if (it == b.index.end())
        return std::nullopt;
    return it->second;
}

std::pair<std::optional<int>, Vec> PresentedAlgebra::parse_element(std::string const& text,
                                                                    std::optional<int> expected_degree) const {
    auto terms = parse_terms(text);
    std::optional<int> degree = expected_degree;
    std::vector<std::pair<PrimeField::Elem, Monomial>> monos;
    for (auto const& t : terms) {
        auto c = field_.from_int(t.coeff);
        if (c == 0)
            continue;
        std::string single;
        for (std::size_t i = 0; i < t.factors.size(); ++i) {
            single += (i ? "*" : "") + t.factors[i].name + "^" + std::to_string(t.factors[i].exponent);
        }
        PrimeField::Elem sc = 1;
        Monomial m = spec_.graded_commutative ? Monomial(spec_.generators.size(), 0) : Monomial{};
        if (!single.empty())
            m = parse_monomial(single, sc);
        int d = degree_of(m);
        if (degree && *degree != d)
            throw InvalidInput("element '" + text + "' is not homogeneous of degree " + std::to_string(*degree));
        degree = d;
        monos.emplace_back(field_.mul(c, sc), m);
    }
    if (!degree)
        return {std::nullopt, {}};
    Vec out = zero_vec(field_, dim(*degree));
    for (auto const& [c, m] : monos)
        vec_axpy(field_, out, c, monomial_vector(m));
    return {degree, out};
}

std::vector<std::string> PresentedAlgebra::check_confluence() const {
    std::vector<std::string> bad;
    auto const& gens = spec_.generators;
    auto full_nf = [&](std::optional<std::pair<PrimeField::Elem, Monomial>> const& step)
        -> std::optional<std::pair<PrimeField::Elem, Monomial>> {
        if (!step)
            return std::nullopt;
        auto nf = normal_form(step->second);
        if (!nf)
            return std::nullopt;
        return std::make_pair(field_.mul(step->first, nf->first), nf->second);
    };
    auto in_range = [&](Monomial const& m) {
        int d = degree_of(m);
        return d >= lo_ && d <= hi_;
    };
    auto describe = [&](Monomial const& m) {
        std::ostringstream os;
        if (spec_.graded_commutative) {
            for (std::size_t g = 0; g < m.size(); ++g)
                if (m[g])
                    os << gens[g].name << "^" << m[g] << " ";
        } else {
            for (int g : m)
                os << gens[static_cast<std::size_t>(g)].name;
        }
        return os.str();
    };

    if (spec_.graded_commutative) {
        // Pseudo-rules g^2 -> 0 for odd generators join the critical pairs.
        std::vector<std::pair<Monomial, std::optional<std::size_t>>> lhs;
        for (std::size_t r = 0; r < rules_.size(); ++r)
            lhs.emplace_back(rules_[r].lhs, r);
        if (field_.characteristic() != 2)
            for (std::size_t g = 0; g < gens.size(); ++g)
                if (odd(gens[g].degree)) {
                    Monomial m(gens.size(), 0);
                    m[g] = 2;
                    lhs.emplace_back(m, std::nullopt);
                }
        for (std::size_t i = 0; i < lhs.size(); ++i)
            for (std::size_t j = i + 1; j < lhs.size(); ++j) {
                Monomial l(gens.size());
                for (std::size_t g = 0; g < gens.size(); ++g)
                    l[g] = std::max(lhs[i].first[g], lhs[j].first[g]);
                if (!in_range(l))
                    continue;
                auto via = [&](std::optional<std::size_t> r) -> std::optional<std::pair<PrimeField::Elem, Monomial>> {
                    if (!r)
                        return std::nullopt;
                    return full_nf(rewrite_once(l, *r));
                };
                if (via(lhs[i].second) != via(lhs[j].second))
                    bad.push_back("critical pair at " + describe(l));
            }
        return bad;
    }

    auto rewrite_at = [&](Monomial const& m, std::size_t r, std::size_t pos) {
        auto const& rule = rules_[r];
        std::optional<std::pair<PrimeField::Elem, Monomial>> out;
        if (!rule.rhs)
            return out;
        Monomial w(m.begin(), m.begin() + static_cast<std::ptrdiff_t>(pos));
        w.insert(w.end(), rule.rhs->begin(), rule.rhs->end());
        w.insert(w.end(), m.begin() + static_cast<std::ptrdiff_t>(pos + rule.lhs.size()), m.end());
        out = std::make_pair(rule.coeff, w);
        return out;
    };
    for (std::size_t i = 0; i < rules_.size(); ++i)
        for (std::size_t j = 0; j < rules_.size(); ++j) {
            auto const& a = rules_[i].lhs;
            auto const& b = rules_[j].lhs;
            for (std::size_t k = 1; k < std::min(a.size(), b.size()); ++k) {
                if (!std::equal(a.end() - static_cast<std::ptrdiff_t>(k), a.end(), b.begin()))
                    continue;
                Monomial w = a;
                w.insert(w.end(), b.begin() + static_cast<std::ptrdiff_t>(k), b.end());
                if (!in_range(w))
                    continue;
                if (full_nf(rewrite_at(w, i, 0)) != full_nf(rewrite_at(w, j, a.size() - k)))
                    bad.push_back("overlap " + describe(w));
            }
            if (i != j && b.size() <= a.size()) {
                auto it = std::search(a.begin(), a.end(), b.begin(), b.end());
                if (it != a.end() && in_range(a) &&
                    full_nf(rewrite_at(a, i, 0)) != full_nf(rewrite_at(a, j, static_cast<std::size_t>(it - a.begin()))))
                    bad.push_back("inclusion " + describe(a));
            }
        }
    return bad;
}

std::shared_ptr<PresentedAlgebra> PresentedAlgebra::with_window(int window) const {
    auto s = spec_;
    s.window = window;
    return std::make_shared<PresentedAlgebra>(s);
}

TensorAlgebra::TensorAlgebra(std::shared_ptr<GradedAlgebra const> a, std::shared_ptr<GradedAlgebra const> b)
    : a_(std::move(a)), b_(std::move(b)) {
    if (!(a_->field() == b_->field()))
        throw InvalidInput("tensor product of algebras over different fields");
    lo_ = a_->window_lo() + b_->window_lo();
    if (a_->finite() && b_->finite())
        hi_ = a_->window_hi() + b_->window_hi();
    else
        hi_ = std::min(a_->window_hi() + b_->window_lo(), a_->window_lo() + b_->window_hi());
}

std::vector<TensorAlgebra::Block> const& TensorAlgebra::blocks(int d) const {
    require_window(d, "tensor algebra");
    std::lock_guard lock(mu_);
    auto it = blocks_.find(d);
    if (it != blocks_.end())
        return it->second;
    std::vector<Block> out;
    std::size_t offset = 0;
    for (int p = a_->window_lo(); p <= a_->window_hi(); ++p) {
        int q = d - p;
        if (q < b_->window_lo() || q > b_->window_hi())
            continue;
        auto da = a_->dim_or_zero(p);
        auto db = b_->dim_or_zero(q);
        if (da == 0 || db == 0)
            continue;
        out.push_back({p, offset, da, db});
        offset += da * db;
    }
    return blocks_.emplace(d, std::move(out)).first->second;
}

std::size_t TensorAlgebra::dim(int d) const {
    if ((bounded_below() && d < lo_) || (finite() && d > hi_))
        return 0;
    auto const& bl = blocks(d);
    return bl.empty() ? 0 : bl.back().offset + bl.back().left_dim * bl.back().right_dim;
}

std::pair<BasisRef, BasisRef> TensorAlgebra::split(BasisRef x) const {
    for (auto const& b : blocks(x.deg)) {
        if (x.idx < b.offset + b.left_dim * b.right_dim) {
            auto local = x.idx - b.offset;
            return {BasisRef{b.left_deg, static_cast<std::uint32_t>(local / b.right_dim)},
                    BasisRef{x.deg - b.left_deg, static_cast<std::uint32_t>(local % b.right_dim)}};
        }
    }
    throw InvalidInput("tensor basis index out of range");
}

BasisRef TensorAlgebra::join(BasisRef a, BasisRef b) const {
    int d = a.deg + b.deg;
    for (auto const& bl : blocks(d))
        if (bl.left_deg == a.deg)
            return {d, static_cast<std::uint32_t>(bl.offset + a.idx * bl.right_dim + b.idx)};
    throw InvalidInput("tensor factor degrees outside the window");
}

Vec TensorAlgebra::tensor(int da, Vec const& a, int db, Vec const& b) const {
    int d = da + db;
    Vec out = zero_vec(field(), dim(d));
    if (vec_is_zero(a) || vec_is_zero(b))
        return out;
    for (auto const& bl : blocks(d))
        if (bl.left_deg == da) {
            auto k = kron(field(), a, b);
            std::copy(k.begin(), k.end(), out.begin() + static_cast<std::ptrdiff_t>(bl.offset));
            return out;
        }
    throw InvalidInput("tensor factor degrees outside the window");
}

Vec TensorAlgebra::multiply_basis(BasisRef x, BasisRef y) const {
    require_window(x.deg + y.deg, "multiply");
    auto [a, b] = split(x);
    auto [a2, b2] = split(y);
    auto const& f = field();
    auto aa = a_->multiply_basis(a, a2);
    auto bb = b_->multiply_basis(b, b2);
    auto out = tensor(a.deg + a2.deg, aa, b.deg + b2.deg, bb);
    return vec_scale(f, f.sign(static_cast<long long>(b.deg) * a2.deg), std::move(out));
}

std::string TensorAlgebra::label(BasisRef x) const {
    auto [a, b] = split(x);
    return a_->label(a) + "⊗" + b_->label(b);
}

std::optional<std::uint32_t> TensorAlgebra::unit_index() const {
    auto ua = a_->unit_index();
    auto ub = b_->unit_index();
    if (!ua || !ub)
        return std::nullopt;
    return join({0, *ua}, {0, *ub}).idx;
}

Vec OppositeAlgebra::multiply_basis(BasisRef x, BasisRef y) const {
    auto const& f = field();
    return vec_scale(f, f.sign(static_cast<long long>(x.deg) * y.deg), a_->multiply_basis(y, x));
}

std::shared_ptr<TensorAlgebra> enveloping(std::shared_ptr<GradedAlgebra const> a) {
    return std::make_shared<TensorAlgebra>(std::make_shared<OppositeAlgebra>(a), a);
}

TableAlgebra::TableAlgebra(PrimeField field, int lo, std::vector<std::vector<std::string>> labels,
                           std::optional<std::uint32_t> unit)
    : field_(field), lo_(lo), labels_(std::move(labels)), unit_(unit) {
    if (unit_ && (lo_ > 0 || -lo_ >= static_cast<int>(labels_.size()) ||
                  *unit_ >= labels_[static_cast<std::size_t>(-lo_)].size()))
        throw InvalidInput("table algebra unit out of range");
}

std::size_t TableAlgebra::dim(int d) const {
    if (d < window_lo() || d > window_hi())
        return 0;
    return labels_[static_cast<std::size_t>(d - lo_)].size();
}

void TableAlgebra::set_product(BasisRef a, BasisRef b, Vec value) {
    if (a.idx >= dim(a.deg) || b.idx >= dim(b.deg) || value.size() != dim(a.deg + b.deg))
        throw InvalidInput("table algebra product has wrong shape");
    products_[{a, b}] = std::move(value);
}

Vec TableAlgebra::multiply_basis(BasisRef a, BasisRef b) const {
    if (unit_ && a.deg == 0 && a.idx == *unit_)
        return unit_vec(field_, dim(b.deg), b.idx);
    if (unit_ && b.deg == 0 && b.idx == *unit_)
        return unit_vec(field_, dim(a.deg), a.idx);
    auto it = products_.find({a, b});
    if (it == products_.end())
        return zero_vec(field_, dim(a.deg + b.deg));
    return it->second;
}

std::string TableAlgebra::label(BasisRef a) const {
    if (a.idx >= dim(a.deg))
        throw InvalidInput("table algebra basis index out of range");
    return labels_[static_cast<std::size_t>(a.deg - lo_)][a.idx];
}

} // namespace obstruct
