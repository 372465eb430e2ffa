#pragma once

#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "smallgen/pipelines.hpp"
#include "smallgen/specdoc.hpp"
#include "smallgen/version.hpp"

namespace smallgen {

using json = nlohmann::ordered_json;

// ---- serialization helpers (decimal strings with explicit bounds) ----

inline json enclosure_json(const RealEnclosure& e, int digits = 30) {
    json j;
    j["dec"] = decimal_string(e.mid(), digits);
    j["lo"] = decimal_string(e.lo, digits);
    j["hi"] = decimal_string(e.hi, digits);
    j["width"] = decimal_string(e.width(), 6);
    return j;
}

inline json poly_json(const IntPoly& f) {
    json j;
    j["str"] = f.str();
    std::vector<std::string> cs;
    for (const auto& c : f.coeffs()) cs.push_back(c.get_str());
    j["coefficients"] = cs;
    return j;
}

inline json height_json(const LogHeight& h, long width_exp = 96) {
    json j;
    j["minpoly"] = poly_json(h.minpoly());
    j["degree"] = h.degree();
    j["exact_one"] = h.exact_one();
    if (h.exact_mahler()) j["mahler_exact"] = h.exact_mahler()->get_str();
    j["mahler"] = enclosure_json(h.mahler(width_exp));
    j["log_height"] = enclosure_json(h.log_value(width_exp));
    return j;
}

inline json disc_json(const DiscriminantResult& d) {
    json j;
    j["value"] = d.value.get_str();
    j["status"] = d.exact ? "exact" : "up_to_squares_at";
    if (!d.exact) {
        std::vector<std::string> ps;
        for (const auto& p : d.uncertain_at) ps.push_back(p.get_str());
        j["uncertain_at"] = ps;
    }
    return j;
}

inline json found_prime_json(const std::optional<FoundPrime>& p) {
    json j;
    if (!p) {
        j["found"] = false;
    } else {
        j["found"] = true;
        j["p"] = p->p.get_str();
        j["probable"] = p->probable;
    }
    return j;
}

inline json abelian_spec_json(const AbelianSpec& s) {
    json j;
    j["modulus"] = s.modulus;
    j["subgroup"] = s.subgroup;
    j["degree"] = s.degree;
    return j;
}

inline json delta_json(const DeltaCertificate& c) {
    json j;
    j["exhaustive"] = c.exhaustive;
    j["candidates_scanned"] = c.candidates_scanned;
    j["bound_t2"] = c.bound_t2.get_str();
    if (c.generator) {
        j["generator"] = poly_json(*c.generator);
        j["height"] = height_json(*c.height);
    } else {
        j["generator"] = nullptr;
    }
    return j;
}

inline json thm12_json(const Thm12Report& r) {
    json j;
    j["mode"] = "proof-step verification";
    j["spec"] = abelian_spec_json(r.spec);
    j["minimized"] = abelian_spec_json(r.minimized);
    j["degree"] = r.degree;
    j["conductor"] = r.conductor;
    j["abs_disc"] = r.abs_disc.get_str();
    j["conductor_bound_ok"] = r.conductor_bound_ok;
    j["interval"] = "(sqrt|disc|, 5 sqrt|disc|]";
    j["split_prime_congruent_1"] = found_prime_json(r.split_prime_congruent_1);
    j["split_prime_sharp"] = found_prime_json(r.split_prime_sharp);
    if (r.generator_search_ran) {
        json g;
        g["thm41_conclusion_ok"] = r.thm41_conclusion_ok;
        if (r.generator_below_sharp_prime && r.generator_below_sharp_prime->generator) {
            g["generator"] = poly_json(*r.generator_below_sharp_prime->generator);
            g["height"] = height_json(*r.generator_below_sharp_prime->height);
        }
        if (r.delta_cert) g["delta"] = delta_json(*r.delta_cert);
        if (r.delta_le_bound) g["delta_le_25disc_pow"] = verdict_str(*r.delta_le_bound);
        j["generator_section"] = g;
    }
    return j;
}

inline json family_json(const FamilyReport& r) {
    json j;
    j["m"] = r.m;
    j["n"] = r.n;
    j["p"] = r.p.get_str();
    j["q"] = r.q.get_str();
    j["d"] = r.d;
    j["degree_ok"] = r.degree_ok;
    j["height_alpha_exact"] = r.height_alpha_exact;
    j["disc_m"] = disc_json(r.disc_m);
    j["pq_pow_divides_disc_m"] = r.pq_divides_disc_m;
    j["pq_divisibility_on_order_only"] = r.pq_divisibility_on_order_only;
    if (r.abs_disc_k) {
        j["abs_disc_k"] = r.abs_disc_k->get_str();
    } else {
        j["abs_disc_k_lower"] = r.disc_k_lower.get_str();
        j["abs_disc_k_upper"] = r.disc_k_upper.get_str();
    }
    json g;
    g["a"] = r.gamma.a.get_str();
    g["b"] = r.gamma.b.get_str();
    g["minpoly"] = poly_json(r.gamma.minpoly);
    g["height"] = height_json(r.gamma.height);
    g["height_bound_ok"] = r.gamma.height_bound_ok;
    j["gamma"] = g;
    j["lower_sandwich"] = verdict_str(r.lower_sandwich);
    j["upper_sandwich"] = verdict_str(r.upper_sandwich);
    return j;
}

inline json sandwich_json(const SandwichReport& r) {
    json j;
    j["x"] = r.x;
    j["q"] = r.spec.q;
    j["a"] = r.spec.a;
    j["pi_x"] = r.pi_x;
    j["pi_sqrt"] = r.pi_sqrt;
    j["lower_ok"] = r.lower_ok;
    j["upper_ok"] = r.upper_ok;
    j["lower_slack"] = r.lower_slack;
    j["upper_slack"] = r.upper_slack;
    j["psi_paper_form"] = enclosure_json(r.psi_paper.encl());
    j["psi_von_mangoldt"] = enclosure_json(r.psi_von_mangoldt.encl());
    return j;
}

inline json exponents_json(const ExponentTable& t) {
    json j;
    j["d"] = t.d;
    j["b"] = t.b;
    j["ruppert"] = t.ruppert.get_str();
    j["ruppert_strong"] = t.ruppert_strong.get_str();
    j["silverman"] = t.silverman.get_str();
    j["vw_threshold"] = t.vw_threshold.get_str();
    if (t.dubickas) j["dubickas"] = t.dubickas->get_str();
    json fam = json::object();
    for (auto& [n, e] : t.family) fam[std::to_string(n)] = e.get_str();
    j["family"] = fam;
    return j;
}

inline json composite_json(const CompositeCheckReport& r) {
    json j;
    j["f1"] = poly_json(r.f1);
    j["f2"] = poly_json(r.f2);
    j["disc1"] = disc_json(r.disc1);
    j["disc2"] = disc_json(r.disc2);
    j["in_hypothesis"] = r.in_hypothesis;
    j["compositum_degree"] = r.compositum_degree;
    j["degree_ok"] = r.degree_ok;
    j["identity_value"] = r.identity_value.get_str();
    if (r.compositum_disc) j["compositum_disc"] = disc_json(*r.compositum_disc);
    if (r.identity_matches) j["identity_matches"] = *r.identity_matches;
    j["height_bound_ok"] = r.height_bound_ok;
    return j;
}

// ------------------------------------------------------------ cache store

// Append-only JSON-lines cache keyed by (spec hash, operation, version).
class CacheStore {
  public:
    CacheStore(std::string dir, bool enabled) : enabled_(enabled), path_(std::move(dir)) {
        if (!path_.empty() && path_.back() != '/') path_ += '/';
        path_ += "cache.jsonl";
    }

    std::optional<json> lookup(const std::string& hash, const std::string& op) const {
        if (!enabled_) return std::nullopt;
        std::ifstream in(path_);
        if (!in) return std::nullopt;
        std::string line;
        std::optional<json> hit;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            json j = json::parse(line, nullptr, false);
            if (j.is_discarded()) {
                std::cerr << "warning: skipping corrupted cache line" << std::endl;
                continue;
            }
            if (j.value("hash", "") == hash && j.value("op", "") == op &&
                j.value("version", "") == kVersion)
                hit = j["report"];  // later entries win
        }
        return hit;
    }

    void store(const std::string& hash, const std::string& op, const json& report) {
        if (!enabled_) return;
        json j;
        j["hash"] = hash;
        j["op"] = op;
        j["version"] = kVersion;
        j["timestamp"] = now_iso();
        j["report"] = report;
        std::ofstream out(path_, std::ios::app);
        if (!out) {
            std::cerr << "warning: cache directory not writable; continuing without cache"
                      << std::endl;
            enabled_ = false;
            return;
        }
        out << j.dump() << "\n";
    }

    static std::string now_iso() {
        auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[32];
        std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&t));
        return buf;
    }

  private:
    bool enabled_;
    std::string path_;
};

// standard report envelope
inline json report_envelope(const json& input, const json& result, u64 seed) {
    json j;
    j["version"] = kVersion;
    j["seed"] = seed;
    j["input"] = input;
    j["result"] = result;
    j["timestamp"] = CacheStore::now_iso();
    return j;
}

}  // namespace smallgen
