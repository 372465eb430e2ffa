#pragma once

#include <json.hpp>

#include <string>

#include "smallgen/abelian.hpp"
#include "smallgen/intpoly.hpp"
#include "smallgen/zutil.hpp"

namespace smallgen {

// Field-spec documents: the JSON input format of the CLI.
//
//   {"type": "polynomial", "coefficients": [c0, c1, ...]}   (constant first)
//   {"type": "quadratic", "m": -5}
//   {"type": "abelian", "modulus": 20, "subgroup": [3]}
//   {"type": "radical-family", "m": 1, "n": 2, "p": 5, "q": 7}

enum class SpecError {
    MalformedJson = 101,
    UnknownType = 102,
    MissingField = 103,
    BadCoefficients = 104,
    NonSquarefreeM = 105,
    NonCoprimeGenerator = 106,
    CompositePQ = 107,
    BadParameter = 108,
};

struct spec_error : std::runtime_error {
    SpecError code;
    spec_error(SpecError c, const std::string& what) : std::runtime_error(what), code(c) {}
};

struct FieldSpecDocument {
    enum class Kind { Polynomial, Quadratic, Abelian, RadicalFamily } kind;
    IntPoly poly;         // Polynomial / Quadratic (x^2 - m)
    mpz_class quad_m;     // Quadratic
    AbelianSpec abelian;  // Abelian
    unsigned long fam_m = 1, fam_n = 2;
    mpz_class fam_p, fam_q;

    std::string canonical;  // normalized serialization
    std::string hash;       // FNV-1a 64 of `canonical`
};

namespace specdetail {

inline std::string fnv1a_hex(const std::string& s) {
    u64 h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline mpz_class json_to_mpz(const nlohmann::json& v) {
    if (v.is_number_integer()) return mpz_class(static_cast<long>(v.get<long long>()));
    if (v.is_string()) return mpz_class(v.get<std::string>());
    throw spec_error(SpecError::BadCoefficients, "expected integer or integer string");
}

}  // namespace specdetail

inline FieldSpecDocument parse_field_spec(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw spec_error(SpecError::MalformedJson, std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        throw spec_error(SpecError::MissingField, "spec needs a string \"type\" field");
    std::string type = j["type"].get<std::string>();

    FieldSpecDocument doc;
    nlohmann::ordered_json canon;
    canon["type"] = type;

    if (type == "polynomial") {
        doc.kind = FieldSpecDocument::Kind::Polynomial;
        if (!j.contains("coefficients") || !j["coefficients"].is_array())
            throw spec_error(SpecError::MissingField, "polynomial spec needs \"coefficients\"");
        std::vector<mpz_class> c;
        for (const auto& v : j["coefficients"]) c.push_back(specdetail::json_to_mpz(v));
        doc.poly = IntPoly(std::move(c));
        if (doc.poly.degree() < 1)
            throw spec_error(SpecError::BadCoefficients, "polynomial must have degree >= 1");
        std::vector<std::string> cs;
        for (const auto& v : doc.poly.coeffs()) cs.push_back(v.get_str());
        canon["coefficients"] = cs;
    } else if (type == "quadratic") {
        doc.kind = FieldSpecDocument::Kind::Quadratic;
        if (!j.contains("m")) throw spec_error(SpecError::MissingField, "quadratic spec needs \"m\"");
        doc.quad_m = specdetail::json_to_mpz(j["m"]);
        if (doc.quad_m == 0 || doc.quad_m == 1)
            throw spec_error(SpecError::BadParameter, "quadratic m must not be 0 or 1");
        if (!is_squarefree(doc.quad_m))
            throw spec_error(SpecError::NonSquarefreeM,
                             "quadratic m = " + doc.quad_m.get_str() + " is not squarefree");
        doc.poly = IntPoly({-doc.quad_m, 0, 1});  // x^2 - m
        canon["m"] = doc.quad_m.get_str();
    } else if (type == "abelian") {
        doc.kind = FieldSpecDocument::Kind::Abelian;
        if (!j.contains("modulus") || !j.contains("subgroup"))
            throw spec_error(SpecError::MissingField, "abelian spec needs \"modulus\", \"subgroup\"");
        unsigned long f = j["modulus"].get<unsigned long>();
        std::vector<unsigned long> gens;
        for (const auto& v : j["subgroup"]) gens.push_back(v.get<unsigned long>());
        try {
            doc.abelian = make_abelian_spec(f, gens);
        } catch (const std::invalid_argument& e) {
            throw spec_error(SpecError::NonCoprimeGenerator, e.what());
        }
        canon["modulus"] = f;
        canon["subgroup"] = doc.abelian.subgroup;  // expanded: canonical form
    } else if (type == "radical-family") {
        doc.kind = FieldSpecDocument::Kind::RadicalFamily;
        for (const char* k : {"m", "n", "p", "q"})
            if (!j.contains(k))
                throw spec_error(SpecError::MissingField, "radical-family spec needs m, n, p, q");
        doc.fam_m = j["m"].get<unsigned long>();
        doc.fam_n = j["n"].get<unsigned long>();
        doc.fam_p = specdetail::json_to_mpz(j["p"]);
        doc.fam_q = specdetail::json_to_mpz(j["q"]);
        if (!is_prime_mpz(doc.fam_p).prime)
            throw spec_error(SpecError::CompositePQ, "p = " + doc.fam_p.get_str() + " is not prime");
        if (!is_prime_mpz(doc.fam_q).prime)
            throw spec_error(SpecError::CompositePQ, "q = " + doc.fam_q.get_str() + " is not prime");
        if (doc.fam_n < 2) throw spec_error(SpecError::BadParameter, "n must exceed 1");
        canon["m"] = doc.fam_m;
        canon["n"] = doc.fam_n;
        canon["p"] = doc.fam_p.get_str();
        canon["q"] = doc.fam_q.get_str();
    } else {
        throw spec_error(SpecError::UnknownType, "unknown spec type: " + type);
    }
    doc.canonical = canon.dump();
    doc.hash = specdetail::fnv1a_hex(doc.canonical);
    return doc;
}

}  // namespace smallgen
