#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include "obstruct/acceptance.hpp"
#include "obstruct/groupcohom.hpp"
#include "obstruct/kadeishvili.hpp"
#include "obstruct/localise.hpp"

using namespace obstruct;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kWindowOverflow = 2;
constexpr int kInvalidInput = 3;
constexpr int kUnsupported = 4;

int default_window() {
    if (char const* env = std::getenv("OBSTRUCT_WINDOW")) {
        try {
            std::size_t pos = 0;
            int w = std::stoi(env, &pos);
            if (pos == std::string(env).size())
                return w;
        } catch (std::exception const&) {
        }
        throw InvalidInput(std::string("OBSTRUCT_WINDOW is not an integer: '") + env + "'");
    }
    return 8;
}

json read_json_file(std::string const& path) {
    std::ifstream in(path);
    if (!in)
        throw InvalidInput("cannot read '" + path + "'");
    try {
        return json::parse(in);
    } catch (json::exception const& e) {
        throw InvalidInput("'" + path + "': " + e.what());
    }
}

std::string sha256_hex(std::string const& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 failed");
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i)
        os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return os.str();
}

/// An algebra argument: a group example name, a presented algebra file or a dg algebra file.
struct AlgebraRef {
    std::string text;
    std::optional<GroupExample> group;
    std::shared_ptr<PresentedAlgebra> presented;
    std::shared_ptr<TableDgAlgebra> dga;
    json canonical;
};

AlgebraRef resolve(std::string const& ref) {
    AlgebraRef out;
    out.text = ref;
    if (std::filesystem::is_regular_file(ref)) {
        auto j = read_json_file(ref);
        out.canonical = j;
        if (j.contains("degrees"))
            out.dga = dga_from_json(j);
        else
            out.presented = std::make_shared<PresentedAlgebra>(algebra_spec_from_json(j));
        return out;
    }
    out.group = parse_group_example(ref);
    out.canonical = ref;
    return out;
}

CyclicGroupData single_group(AlgebraRef const& r) {
    if (!r.group || r.group->factors.size() != 1 || r.group->tate)
        throw InvalidInput("'" + r.text + "' must name a cyclic group such as cyclic:3");
    return r.group->factors.front();
}

/// The ring whose Hochschild complex or modules a command works with.
std::shared_ptr<PresentedAlgebra const> ring_of(AlgebraRef const& r, int window) {
    if (r.presented)
        return r.presented;
    if (r.group)
        return group_cohomology_ring(single_group(r), window);
    throw InvalidInput("'" + r.text + "' is a dg algebra; a presented algebra is required");
}

/// m3 of a group as a cochain over its cohomology ring.
struct GroupMu {
    std::shared_ptr<PresentedAlgebra const> ring;
    HochschildCochain mu;
};

GroupMu group_mu(AlgebraRef const& r, int window) {
    auto tr = cyclic_transfer(single_group(r), window + 4);
    auto ring = std::dynamic_pointer_cast<PresentedAlgebra const>(tr->cohomology_algebra());
    auto ctx = std::make_shared<HochschildContext>(ring);
    return {ring, tr->m3_cochain(ctx, window + 4)};
}

json m3_result(HochschildCochain const& m3, ObstructionVerdict const& v, int cocycle_window) {
    return {{"m3", m3_to_json(m3)}, {"cocycle", verify_m3_cocycle(m3, cocycle_window)}, {"verdict", verdict_to_json(v)}};
}

json cmd_m3(AlgebraRef const& r, int window) {
    if (r.dga) {
        std::shared_ptr<DgAlgebra const> a = r.dga;
        auto tr = canonical_transfer(a, a->window_lo(), a->window_hi());
        auto ctx = std::make_shared<HochschildContext>(tr->cohomology_algebra());
        auto m3 = tr->m3_cochain(ctx, window + 4);
        return m3_result(m3, coboundary_decide(m3, window), window + 4);
    }
    if (!r.group)
        throw InvalidInput("m3 needs a dg algebra file or a group example");
    auto mu = mu_example(*r.group, window);
    return m3_result(mu.m3, mu.verdict, window + 4);
}

json cmd_gamma(AlgebraRef const& r, int window) {
    auto g = single_group(r);
    auto mu = mu_G_tate(g, window);
    auto const& t = dynamic_cast<HochschildContext const&>(*mu.context).values();
    return {{"gamma", cochain_to_json(mu.m3)},
            {"laurent_window", {t.window_lo(), t.window_hi()}},
            {"verdict", verdict_to_json(mu.verdict)}};
}

json cmd_delta(AlgebraRef const& r, json const& cochain, int window) {
    auto ctx = std::make_shared<HochschildContext>(ring_of(r, window + 2));
    auto c = cochain_from_json(cochain, ctx);
    auto d = delta(c, window);
    return {{"delta", cochain_to_json(d)}, {"cocycle", d.is_zero()}};
}

json cmd_cup(AlgebraRef const& r, json const& zeta, json const& eta, int window) {
    auto ctx = std::make_shared<HochschildContext>(ring_of(r, window + 2));
    auto z = cochain_from_json(zeta, ctx);
    auto e = cochain_from_json(eta, ctx);
    return {{"cup", cochain_to_json(cup(z, e, window))}};
}

json cmd_realisable(AlgebraRef const& r, json const& module, int window, bool split) {
    auto [ring, mu] = group_mu(r, window);
    auto x = module_from_json(module, ring);
    return realisability_to_json(realisability_verdict(x, mu, window, split));
}

json cmd_local_global(AlgebraRef const& r, json const& module, int window) {
    auto [ring, mu] = group_mu(r, window);
    auto x = module_from_json(module, ring);
    return local_global_to_json(local_global_check(x, mu, window));
}

json cmd_localize(AlgebraRef const& r, std::vector<std::string> const& invert, std::vector<std::string> const& prime,
                  int window) {
    if (invert.empty() == prime.empty())
        throw InvalidInput("localize needs exactly one of --invert or --at-prime");
    auto ring = ring_of(r, window);
    LocalisedAlgebra t;
    json out;
    if (!invert.empty()) {
        t = localise_algebra(ring, invert, window);
    } else {
        auto primes = graded_primes(*ring);
        auto it = std::find_if(primes.begin(), primes.end(), [&](GradedPrime const& p) {
            auto a = p.generators, b = prime;
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            return a == b;
        });
        if (it == primes.end())
            throw InvalidInput("not a graded prime of the supported family");
        out["prime"] = it->label();
        t = localise_at(ring, *it, window);
    }
    out["inverted"] = t.inverted;
    out["zero_ring"] = t.zero_ring;
    out["identity"] = t.identity();
    if (auto const* p = dynamic_cast<PresentedAlgebra const*>(t.algebra.get()))
        out["presentation"] = algebra_spec_to_json(p->spec());
    json dims = json::object();
    auto const& a = *t.algebra;
    for (int d = a.window_lo(); d <= a.window_hi(); ++d) {
        json basis = json::array();
        for (std::uint32_t i = 0; i < a.dim_or_zero(d); ++i)
            basis.push_back(a.label({d, i}));
        dims[std::to_string(d)] = basis;
    }
    out["basis"] = dims;
    out["window"] = {a.window_lo(), a.window_hi()};
    return out;
}

struct Output {
    std::string path;
    bool compact = false;

    void write(json const& j) const {
        auto text = j.dump(compact ? -1 : 2) + "\n";
        if (path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream out(path);
        if (!out)
            throw InvalidInput("cannot write '" + path + "'");
        out << text;
    }
};

/// Runs `compute` unless a cached result for the same canonical request exists.
json cached(std::string const& dir, json const& request, std::function<json()> const& compute) {
    if (dir.empty())
        return compute();
    auto key = sha256_hex(request.dump());
    auto path = std::filesystem::path(dir) / (key + ".json");
    if (std::filesystem::is_regular_file(path))
        return read_json_file(path.string());
    auto result = compute();
    std::filesystem::create_directories(dir);
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        out << result.dump() << "\n";
    }
    std::filesystem::rename(tmp, path);
    return result;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"obstruct: secondary multiplications and realisability obstructions over prime fields"};
    app.require_subcommand(1);
    app.fallthrough();

    int window = 0;
    int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    Output output;
    std::string cache_dir;
    if (char const* env = std::getenv("OBSTRUCT_CACHE"))
        cache_dir = env;
    app.add_option("-w,--window", window, "Degree window D (default: OBSTRUCT_WINDOW or 8)");
    app.add_option("-o,--output", output.path, "Write the JSON result to a file");
    app.add_option("--cache", cache_dir, "Directory of cached results keyed by SHA-256 of the request");
    app.add_option("-j,--jobs", jobs, "Threads for independent demo cases")->check(CLI::PositiveNumber);
    app.add_flag("--compact", output.compact, "Single-line JSON");

    std::string ref, module_file, cochain_file, eta_file;
    std::vector<std::string> invert, prime;
    std::vector<int> only;
    bool no_split = false, demo_json = false;

    auto* m3 = app.add_subcommand("m3", "m3, its cocycle check and class verdict");
    m3->add_option("algebra", ref, "cyclic:3, product:2,2, tate:cyclic:3 or a dg algebra JSON file")->required();

    auto* hd = app.add_subcommand("hochschild-delta", "Hochschild differential of a cochain");
    hd->add_option("algebra", ref, "Group example or presented algebra JSON file")->required();
    hd->add_option("cochain", cochain_file, "Cochain JSON file")->required();

    auto* cp = app.add_subcommand("cup", "Cup product of two cochains");
    cp->add_option("algebra", ref, "Group example or presented algebra JSON file")->required();
    cp->add_option("zeta", cochain_file, "First cochain JSON file")->required();
    cp->add_option("eta", eta_file, "Second cochain JSON file")->required();

    auto* rl = app.add_subcommand("realisable", "Realisability obstruction of a module");
    rl->add_option("module", module_file, "Module presentation JSON file")->required();
    rl->add_option("algebra", ref, "Cyclic group, e.g. cyclic:3")->required();
    rl->add_flag("--no-split", no_split, "Keep free summands");

    auto* lz = app.add_subcommand("localize", "Graded localisation of a cohomology ring");
    lz->add_option("algebra", ref, "Group example or presented algebra JSON file")->required();
    lz->add_option("--invert", invert, "Homogeneous elements to invert");
    lz->add_option("--at-prime", prime, "Generators of a graded prime")->delimiter(',');

    auto* lg = app.add_subcommand("local-global", "Realisability at every graded prime");
    lg->add_option("module", module_file, "Module presentation JSON file")->required();
    lg->add_option("algebra", ref, "Cyclic group, e.g. cyclic:3")->required();

    auto* gm = app.add_subcommand("gamma", "Image of m3 in the Tate ring");
    gm->add_option("algebra", ref, "Cyclic group, e.g. cyclic:3")->required();

    auto* demo = app.add_subcommand("demo", "Run the acceptance suite");
    demo->add_option("--only", only, "Criterion ids")->delimiter(',');
    demo->add_flag("--json", demo_json, "JSON instead of a table");

    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kInvalidInput;
    }

    try {
        if (window == 0)
            window = default_window();
        if (window < 1)
            throw InvalidInput("window must be positive");

        if (demo->parsed()) {
            auto results = run_acceptance(jobs, only);
            if (demo_json)
                output.write(acceptance_to_json(results));
            else if (output.path.empty())
                std::cout << format_acceptance(results);
            else
                std::ofstream(output.path) << format_acceptance(results);
            bool ok = std::all_of(results.begin(), results.end(), [](auto const& r) { return r.pass; });
            return ok ? kOk : kFailed;
        }

        auto alg = resolve(ref);
        json request{{"algebra", alg.canonical}, {"window", window}};
        std::function<json()> compute;
        if (m3->parsed()) {
            request["command"] = "m3";
            compute = [&] { return cmd_m3(alg, window); };
        } else if (gm->parsed()) {
            request["command"] = "gamma";
            compute = [&] { return cmd_gamma(alg, window); };
        } else if (hd->parsed()) {
            request["command"] = "hochschild-delta";
            request["cochain"] = read_json_file(cochain_file);
            compute = [&] { return cmd_delta(alg, request["cochain"], window); };
        } else if (cp->parsed()) {
            request["command"] = "cup";
            request["zeta"] = read_json_file(cochain_file);
            request["eta"] = read_json_file(eta_file);
            compute = [&] { return cmd_cup(alg, request["zeta"], request["eta"], window); };
        } else if (rl->parsed()) {
            request["command"] = "realisable";
            request["module"] = read_json_file(module_file);
            request["split_free"] = !no_split;
            compute = [&] { return cmd_realisable(alg, request["module"], window, !no_split); };
        } else if (lg->parsed()) {
            request["command"] = "local-global";
            request["module"] = read_json_file(module_file);
            compute = [&] { return cmd_local_global(alg, request["module"], window); };
        } else {
            request["command"] = "localize";
            request["invert"] = invert;
            request["at_prime"] = prime;
            compute = [&] { return cmd_localize(alg, invert, prime, window); };
        }
        auto result = cached(cache_dir, request, compute);
        json out{{"command", request["command"]}, {"input", ref}, {"window", window}, {"result", result}};
        output.write(out);
        return kOk;
    } catch (WindowOverflow const& e) {
        std::cerr << "window overflow: " << e.what() << "\n";
        return kWindowOverflow;
    } catch (Unsupported const& e) {
        std::cerr << "unsupported: " << e.what() << "\n";
        return kUnsupported;
    } catch (InvalidInput const& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kInvalidInput;
    } catch (NotACocycle const& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kInvalidInput;
    } catch (std::exception const& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailed;
    }
}
