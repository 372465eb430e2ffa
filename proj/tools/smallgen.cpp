// smallgen: exact heights, minimal generators, abelian conductors and
// split primes from the command line.  JSON in, JSON out (CSV for scans).

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "smallgen/report.hpp"

using namespace smallgen;

namespace {

struct GlobalOpts {
    std::string out;
    double budget_seconds = 86400;
    unsigned long budget_candidates = 200000000;
    long precision_bits = 96;
    std::string cache_dir = ".smallgen-cache";
    bool no_cache = false;
    u64 seed = kDefaultSeed;
};

EnumerationBudget make_budget(const GlobalOpts& g) {
    EnumerationBudget b;
    b.max_seconds = g.budget_seconds;
    b.max_candidates = g.budget_candidates;
    return b;
}

void emit(const GlobalOpts& g, const std::string& text) {
    if (g.out.empty() || g.out == "-") {
        std::cout << text << std::endl;
    } else {
        std::ofstream f(g.out);
        f << text << "\n";
    }
}

FieldSpecDocument load_spec(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw spec_error(SpecError::MalformedJson, "cannot open spec file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_field_spec(ss.str());
}

// shared cache-or-compute wrapper
int run_cached(const GlobalOpts& g, const std::string& op, const std::string& hash,
               const json& input, const std::function<json()>& compute) {
    std::error_code ec;
    if (!g.no_cache) std::filesystem::create_directories(g.cache_dir, ec);
    CacheStore cache(g.cache_dir, !g.no_cache);
    if (auto hit = cache.lookup(hash, op)) {
        emit(g, hit->dump(2));
        return 0;
    }
    auto t0 = std::chrono::steady_clock::now();
    json result = compute();
    json env = report_envelope(input, result, g.seed);
    env["timings"]["wall_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    cache.store(hash, op, env);
    emit(g, env.dump(2));
    return 0;
}

FieldPtr field_from_doc(const FieldSpecDocument& doc) {
    switch (doc.kind) {
        case FieldSpecDocument::Kind::Polynomial:
        case FieldSpecDocument::Kind::Quadratic:
            return NumberField::from_poly(doc.poly);
        case FieldSpecDocument::Kind::Abelian:
            return NumberField::create(defining_polynomial(doc.abelian), true);
        default:
            throw spec_error(SpecError::BadParameter, "spec type not usable for this command");
    }
}

AbelianSpec abelian_from_doc(const FieldSpecDocument& doc) {
    if (doc.kind == FieldSpecDocument::Kind::Abelian) return doc.abelian;
    if (doc.kind == FieldSpecDocument::Kind::Quadratic) return quadratic_abelian_spec(doc.quad_m);
    throw spec_error(SpecError::BadParameter, "this command needs an abelian or quadratic spec");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Weil heights, minimal generators, conductors and split primes"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--out", g.out, "output file (default stdout)");
    app.add_option("--budget-seconds", g.budget_seconds, "wall-clock budget for searches");
    app.add_option("--budget-candidates", g.budget_candidates, "candidate budget for searches");
    app.add_option("--precision-bits", g.precision_bits, "enclosure rendering precision");
    app.add_option("--cache-dir", g.cache_dir, "result cache directory");
    app.add_flag("--no-cache", g.no_cache, "disable the result cache");
    app.add_option("--seed", g.seed, "seed for randomized primality witnesses");

    std::string spec_path;
    unsigned long arg_qmax = 500, arg_d = 4, arg_x = 100, arg_q = 4, arg_a = 1;
    unsigned long fam_m = 1, fam_n = 2;
    std::string fam_p = "5", fam_q = "7";
    bool with_delta = false, all_residues = false;

    auto* c_height = app.add_subcommand("height", "Weil height of an algebraic number");
    c_height->add_option("--spec", spec_path, "field/element spec (polynomial or quadratic)")
        ->required();

    auto* c_delta = app.add_subcommand("delta", "minimal generator height of a number field");
    c_delta->add_option("--spec", spec_path)->required();

    auto* c_split = app.add_subcommand("split-prime", "least split primes in the sqrt-disc slice");
    c_split->add_option("--spec", spec_path)->required();

    auto* c_abdisc = app.add_subcommand("abelian-disc", "conductor-discriminant data");
    c_abdisc->add_option("--spec", spec_path)->required();

    auto* c_thm12 = app.add_subcommand("thm12", "step-by-step split-prime/generator pipeline");
    c_thm12->add_option("--spec", spec_path)->required();
    c_thm12->add_flag("--with-delta", with_delta, "also run the generator searches (degree <= 4)");

    auto* c_family = app.add_subcommand("family", "radical family sandwich verification");
    c_family->add_option("--spec", spec_path, "radical-family spec file");
    c_family->add_option("--m", fam_m);
    c_family->add_option("--n", fam_n);
    c_family->add_option("--p", fam_p);
    c_family->add_option("--q", fam_q);

    auto* c_scan = app.add_subcommand("linnik-scan", "least prime = 1 (mod q) for q <= qmax");
    c_scan->add_option("--qmax", arg_qmax)->required();

    auto* c_exp = app.add_subcommand("exponents", "exponent table for degree d");
    c_exp->add_option("--d", arg_d)->required();

    auto* c_sand = app.add_subcommand("sandwich", "pi-psi sandwich check");
    c_sand->add_option("--x", arg_x)->required();
    c_sand->add_option("--q", arg_q)->required();
    c_sand->add_option("--a", arg_a);
    c_sand->add_flag("--all-residues", all_residues, "check every coprime residue");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    set_global_seed(g.seed);

    try {
        if (*c_height) {
            auto doc = load_spec(spec_path);
            if (doc.kind != FieldSpecDocument::Kind::Polynomial &&
                doc.kind != FieldSpecDocument::Kind::Quadratic)
                throw spec_error(SpecError::BadParameter, "height needs a polynomial/quadratic spec");
            return run_cached(g, "height", doc.hash, json::parse(doc.canonical), [&] {
                LogHeight h = LogHeight::of_algebraic(doc.poly);
                return height_json(h, g.precision_bits);
            });
        }
        if (*c_delta) {
            auto doc = load_spec(spec_path);
            return run_cached(g, "delta", doc.hash, json::parse(doc.canonical), [&] {
                FieldPtr K = field_from_doc(doc);
                DeltaCertificate cert = delta(K, make_budget(g));
                json j = delta_json(cert);
                j["field"] = poly_json(K->defining_poly());
                return j;
            });
        }
        if (*c_split) {
            auto doc = load_spec(spec_path);
            return run_cached(g, "split-prime", doc.hash, json::parse(doc.canonical), [&] {
                AbelianSpec spec = abelian_from_doc(doc);
                auto fc = field_conductor(spec);
                json j;
                j["conductor"] = fc.conductor;
                j["abs_disc"] = fc.abs_disc.get_str();
                j["prime_congruent_1"] = found_prime_json(least_split_prime_sqrt_interval(
                    fc.abs_disc, 5, fc.conductor, {1 % std::max(1ul, fc.conductor)}));
                j["prime_sharp"] = found_prime_json(least_split_prime_sqrt_interval(
                    fc.abs_disc, 5, fc.conductor, fc.minimized.subgroup));
                return j;
            });
        }
        if (*c_abdisc) {
            auto doc = load_spec(spec_path);
            return run_cached(g, "abelian-disc", doc.hash, json::parse(doc.canonical), [&] {
                AbelianSpec spec = abelian_from_doc(doc);
                auto table = character_group(spec);
                auto fc = field_conductor(spec);
                json j;
                j["degree"] = spec.degree;
                std::vector<unsigned long> conds;
                for (auto& chi : table.chars) conds.push_back(chi.conductor);
                j["character_conductors"] = conds;
                j["abs_disc"] = fc.abs_disc.get_str();
                j["conductor"] = fc.conductor;
                j["conductor_bound_ok"] = fc.conductor_bound_ok;
                j["defining_polynomial"] = poly_json(defining_polynomial(fc.minimized));
                return j;
            });
        }
        if (*c_thm12) {
            auto doc = load_spec(spec_path);
            std::string op = with_delta ? "thm12+delta" : "thm12";
            return run_cached(g, op, doc.hash, json::parse(doc.canonical), [&] {
                AbelianSpec spec = abelian_from_doc(doc);
                return thm12_json(verify_thm12_steps(spec, with_delta, make_budget(g)));
            });
        }
        if (*c_family) {
            if (!spec_path.empty()) {
                auto doc = load_spec(spec_path);
                if (doc.kind != FieldSpecDocument::Kind::RadicalFamily)
                    throw spec_error(SpecError::BadParameter, "family needs a radical-family spec");
                fam_m = doc.fam_m;
                fam_n = doc.fam_n;
                fam_p = doc.fam_p.get_str();
                fam_q = doc.fam_q.get_str();
            }
            json input;
            input["type"] = "radical-family";
            input["m"] = fam_m;
            input["n"] = fam_n;
            input["p"] = fam_p;
            input["q"] = fam_q;
            std::string hash = specdetail::fnv1a_hex(input.dump());
            return run_cached(g, "family", hash, input, [&] {
                return family_json(
                    verify_family(fam_m, fam_n, mpz_class(fam_p), mpz_class(fam_q), make_budget(g)));
            });
        }
        if (*c_scan) {
            ScanResult res = linnik_exponent_scan(arg_qmax);
            std::ostringstream csv;
            csv << "q,least_prime,ratio,probable_flag,millis\n";
            char buf[64];
            for (const auto& r : res.rows) {
                snprintf(buf, sizeof buf, "%.6f", r.ratio);
                csv << r.q << "," << r.least_prime << "," << buf << ","
                    << (r.probable ? 1 : 0) << "," << r.millis << "\n";
            }
            emit(g, csv.str());
            return 0;
        }
        if (*c_exp) {
            json input;
            input["d"] = arg_d;
            std::string hash = specdetail::fnv1a_hex(input.dump());
            return run_cached(g, "exponents", hash, input,
                              [&] { return exponents_json(exponent_table(arg_d)); });
        }
        if (*c_sand) {
            json input;
            input["x"] = arg_x;
            input["q"] = arg_q;
            input["a"] = all_residues ? json("all") : json(arg_a);
            std::string hash = specdetail::fnv1a_hex(input.dump());
            return run_cached(g, "sandwich", hash, input, [&] {
                if (!all_residues)
                    return sandwich_json(check_pi_psi_sandwich(arg_x, make_ap_spec(arg_q, arg_a)));
                json arr = json::array();
                for (unsigned long a = 1; a <= arg_q; ++a) {
                    if (std::gcd(a, arg_q) != 1) continue;
                    arr.push_back(sandwich_json(check_pi_psi_sandwich(arg_x, make_ap_spec(arg_q, a))));
                }
                json j;
                j["grid"] = arr;
                return j;
            });
        }
    } catch (const spec_error& e) {
        std::cerr << "spec error " << static_cast<int>(e.code) << ": " << e.what() << std::endl;
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << std::endl;
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 2;
}
