#include "tensorcert/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace tensorcert {
namespace io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw std::invalid_argument("family file: field '" + where + "': " + what);
}

BigRat parse_rational(const json& j, const std::string& where) {
    if (j.is_number_integer()) return BigRat(j.get<long long>());
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        auto slash = s.find('/');
        try {
            if (slash == std::string::npos) return BigRat(BigInt(s));
            BigInt num(s.substr(0, slash)), den(s.substr(slash + 1));
            if (den == 0) fail(where, "zero denominator");
            return BigRat(num, den);
        } catch (const std::runtime_error&) {
            fail(where, "not a valid rational literal '" + s + "'");
        }
    }
    fail(where, "expected an integer or a 'p/q' string");
}

std::uint64_t parse_mod_p(const json& j, const PrimeField& f, const std::string& where) {
    if (j.is_number_integer()) return f.from_long(j.get<long long>());
    if (j.is_string()) {
        try {
            return f.from_long(std::stoll(j.get<std::string>()));
        } catch (const std::exception&) {
            fail(where, "not a valid integer literal");
        }
    }
    fail(where, "expected an integer");
}

template <class F>
Vec<F> parse_vector(const F& f, const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) fail(where, "expected a nonempty array of scalars");
    Vec<F> v;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string at = where + "[" + std::to_string(i) + "]";
        if constexpr (F::is_prime_field) {
            v.push_back(parse_mod_p(j[i], f, at));
        } else {
            v.push_back(parse_rational(j[i], at));
        }
    }
    return v;
}

template <class F>
json scalar_to_json(const F& f, const typename F::Elem& x) {
    if constexpr (F::is_prime_field) {
        (void)f;
        if (x <= (1ull << 53)) return json(x);
        return json(std::to_string(x));
    } else {
        (void)f;
        BigInt num = numerator(x), den = denominator(x);
        if (den == 1 && num >= std::numeric_limits<long long>::min() && num <= std::numeric_limits<long long>::max())
            return json(static_cast<long long>(num));
        std::ostringstream os;
        os << num;
        if (den != 1) os << "/" << den;
        return json(os.str());
    }
}

template <class F>
ProductFamily<F> parse_family_body(const F& f, const json& j) {
    if (!j.contains("mode_dims")) fail("mode_dims", "missing");
    if (!j["mode_dims"].is_array() || j["mode_dims"].size() < 2) fail("mode_dims", "expected an array of at least 2 dimensions");
    std::vector<std::size_t> dims;
    for (std::size_t i = 0; i < j["mode_dims"].size(); ++i) {
        if (!j["mode_dims"][i].is_number_integer() || j["mode_dims"][i].get<long long>() <= 0)
            fail("mode_dims[" + std::to_string(i) + "]", "expected a positive integer");
        dims.push_back(j["mode_dims"][i].get<std::size_t>());
    }
    if (!j.contains("tensors") || !j["tensors"].is_array() || j["tensors"].empty())
        fail("tensors", "expected a nonempty array");
    std::vector<ProductTensor<F>> ts;
    for (std::size_t a = 0; a < j["tensors"].size(); ++a) {
        const std::string at = "tensors[" + std::to_string(a) + "]";
        const json& tj = j["tensors"][a];
        const json* factors = nullptr;
        ProductTensor<F> t;
        t.coeff = f.one();
        if (tj.is_array()) {
            factors = &tj;
        } else if (tj.is_object()) {
            if (!tj.contains("factors")) fail(at + ".factors", "missing");
            factors = &tj["factors"];
            if (tj.contains("coeff")) {
                if constexpr (F::is_prime_field) {
                    t.coeff = parse_mod_p(tj["coeff"], f, at + ".coeff");
                } else {
                    t.coeff = parse_rational(tj["coeff"], at + ".coeff");
                }
            }
        } else {
            fail(at, "expected an array of factors or an object");
        }
        if (!factors->is_array() || factors->size() != dims.size())
            fail(at + ".factors", "expected " + std::to_string(dims.size()) + " factor arrays");
        for (std::size_t jm = 0; jm < factors->size(); ++jm) {
            const std::string fat = at + ".factors[" + std::to_string(jm) + "]";
            Vec<F> v = parse_vector(f, (*factors)[jm], fat);
            if (v.size() != dims[jm]) fail(fat, "factor length does not match mode_dims");
            if (vec_is_zero(f, v)) fail(fat, "zero factor vector");
            t.factors.push_back(std::move(v));
        }
        if (f.is_zero(t.coeff)) fail(at + ".coeff", "zero coefficient");
        ts.push_back(std::move(t));
    }
    return ProductFamily<F>(f, dims, ts);
}

template <class F>
SymmetricFamily<F> parse_symmetric_body(const F& f, const json& j) {
    if (!j.contains("m") || !j["m"].is_number_integer() || j["m"].get<long long>() <= 0)
        fail("symmetric.m", "expected a positive integer");
    std::size_t m = j["m"].get<std::size_t>();
    if (!j.contains("base_vectors") || !j["base_vectors"].is_array() || j["base_vectors"].empty())
        fail("symmetric.base_vectors", "expected a nonempty array");
    std::vector<Vec<F>> base;
    for (std::size_t i = 0; i < j["base_vectors"].size(); ++i) {
        const std::string at = "symmetric.base_vectors[" + std::to_string(i) + "]";
        Vec<F> v = parse_vector(f, j["base_vectors"][i], at);
        if (vec_is_zero(f, v)) fail(at, "zero base vector");
        base.push_back(std::move(v));
    }
    std::vector<typename F::Elem> coeffs;
    if (j.contains("coeffs")) {
        if (!j["coeffs"].is_array() || j["coeffs"].size() != base.size())
            fail("symmetric.coeffs", "expected one coefficient per base vector");
        for (std::size_t i = 0; i < j["coeffs"].size(); ++i) {
            const std::string at = "symmetric.coeffs[" + std::to_string(i) + "]";
            if constexpr (F::is_prime_field) {
                coeffs.push_back(parse_mod_p(j["coeffs"][i], f, at));
            } else {
                coeffs.push_back(parse_rational(j["coeffs"][i], at));
            }
            if (f.is_zero(coeffs.back())) fail(at, "zero coefficient");
        }
    } else {
        coeffs.assign(base.size(), f.one());
    }
    return SymmetricFamily<F>(f, base, coeffs, m);
}

template <class F>
json family_body_to_json(const ProductFamily<F>& fam) {
    json j;
    j["schema"] = kSchemaVersion;
    if constexpr (F::is_prime_field) {
        j["field"] = {{"type", "prime"}, {"p", fam.field.modulus()}};
    } else {
        j["field"] = {{"type", "rational"}};
    }
    j["mode_dims"] = fam.mode_dims;
    json ts = json::array();
    for (const auto& t : fam.tensors) {
        json tj;
        json fs = json::array();
        for (const auto& fac : t.factors) {
            json fj = json::array();
            for (const auto& x : fac) fj.push_back(scalar_to_json(fam.field, x));
            fs.push_back(fj);
        }
        tj["factors"] = fs;
        if (!fam.field.eq(t.coeff, fam.field.one())) tj["coeff"] = scalar_to_json(fam.field, t.coeff);
        ts.push_back(tj);
    }
    j["tensors"] = ts;
    return j;
}

template <class F>
json symmetric_body_to_json(const SymmetricFamily<F>& s) {
    json j;
    j["m"] = s.power;
    json bs = json::array();
    for (const auto& v : s.base_vectors) {
        json vj = json::array();
        for (const auto& x : v) vj.push_back(scalar_to_json(s.field, x));
        bs.push_back(vj);
    }
    j["base_vectors"] = bs;
    json cs = json::array();
    for (const auto& c : s.coeffs) cs.push_back(scalar_to_json(s.field, c));
    j["coeffs"] = cs;
    return j;
}

}  // namespace

FamilyDoc parse_family_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("family file: expected a JSON object");
    if (j.contains("schema") && j["schema"].is_number_integer() && j["schema"].get<int>() != kSchemaVersion)
        throw std::invalid_argument("family file: unsupported schema version");
    if (!j.contains("field") || !j["field"].is_object() || !j["field"].contains("type"))
        fail("field", "expected an object with a 'type'");
    std::string kind = j["field"]["type"].get<std::string>();

    bool has_sym = j.contains("symmetric");
    bool has_tensors = j.contains("tensors");
    if (has_sym && has_tensors) fail("symmetric", "give either 'tensors' or a 'symmetric' block, not both");

    if (kind == "rational") {
        Rationals f;
        if (has_sym) {
            RatSym s = parse_symmetric_body(f, j["symmetric"]);
            return FamilyDoc{symmetric_lift(s), s};
        }
        return FamilyDoc{parse_family_body(f, j), std::nullopt};
    }
    if (kind == "prime") {
        if (!j["field"].contains("p") || !j["field"]["p"].is_number_integer() || j["field"]["p"].get<long long>() <= 0)
            fail("field.p", "expected a prime modulus");
        PrimeField f(j["field"]["p"].get<std::uint64_t>());
        if (has_sym) {
            GfSym s = parse_symmetric_body(f, j["symmetric"]);
            return FamilyDoc{symmetric_lift(s), s};
        }
        return FamilyDoc{parse_family_body(f, j), std::nullopt};
    }
    fail("field.type", "expected 'rational' or 'prime'");
}

FamilyDoc load_family_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open family file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("family file '" + path + "': " + e.what());
    }
    return parse_family_json(j);
}

json family_doc_to_json(const FamilyDoc& doc) {
    json j = std::visit([](const auto& fam) { return family_body_to_json(fam); }, doc.family);
    if (doc.symmetric) {
        // symmetric block replaces the explicit tensor list
        j.erase("tensors");
        std::visit([&](const auto& s) { j["symmetric"] = symmetric_body_to_json(s); }, *doc.symmetric);
    }
    return j;
}

FamilyDoc reinterpret_mod_p(const FamilyDoc& doc, std::uint64_t p) {
    PrimeField f(p);
    const auto* rat = std::get_if<RatFamily>(&doc.family);
    if (!rat) throw std::invalid_argument("reinterpret_mod_p: family is already over a prime field");
    auto to_gf = [&](const BigRat& x) -> std::uint64_t {
        BigInt pm = p;
        BigInt nr = numerator(x) % pm;
        if (nr < 0) nr += pm;
        BigInt dr = denominator(x) % pm;
        std::uint64_t dv = dr.convert_to<std::uint64_t>();
        if (dv == 0) throw std::invalid_argument("reinterpret_mod_p: denominator divisible by p");
        return f.div(nr.convert_to<std::uint64_t>(), dv);
    };
    std::vector<ProductTensor<PrimeField>> ts;
    for (const auto& t : rat->tensors) {
        ProductTensor<PrimeField> g;
        g.coeff = to_gf(t.coeff);
        for (const auto& fac : t.factors) {
            Vec<PrimeField> v;
            for (const auto& x : fac) v.push_back(to_gf(x));
            g.factors.push_back(std::move(v));
        }
        ts.push_back(std::move(g));
    }
    return FamilyDoc{GfFamily(f, rat->mode_dims, ts), std::nullopt};
}

json index_set_to_json(const IndexSet& s) {
    json out = json::array();
    for (auto i : s) out.push_back(i + 1);
    return out;
}

IndexSet index_set_from_json(const json& j) {
    IndexSet s;
    for (const auto& x : j) {
        std::size_t v = x.get<std::size_t>();
        if (v == 0) throw std::invalid_argument("index sets are 1-based");
        s.push_back(v - 1);
    }
    return s;
}

json certificate_to_json(const Certificate& cert, const std::string& input_path, const std::string& input_hash) {
    json j;
    j["schema"] = kSchemaVersion;
    j["criterion"] = cert.criterion;
    j["status"] = status_name(cert.status);
    json w = json::object();
    if (cert.witness.subset) w["subset"] = index_set_to_json(*cert.witness.subset);
    if (cert.witness.subset_dims) w["subset_dims"] = *cert.witness.subset_dims;
    if (cert.witness.separator) w["separator"] = index_set_to_json(*cert.witness.separator);
    if (cert.witness.mode_partition) {
        json mp = json::array();
        for (const auto& b : *cert.witness.mode_partition) mp.push_back(index_set_to_json(b));
        w["mode_partition"] = mp;
    }
    if (!cert.witness.subset_partitions.empty()) {
        json sp = json::array();
        for (const auto& [s, part] : cert.witness.subset_partitions) {
            json e;
            e["subset"] = index_set_to_json(s);
            json mp = json::array();
            for (const auto& b : part) mp.push_back(index_set_to_json(b));
            e["partition"] = mp;
            sp.push_back(e);
        }
        w["subset_partitions"] = sp;
    }
    if (cert.witness.kranks) w["kranks"] = *cert.witness.kranks;
    if (cert.witness.dims) w["dims"] = *cert.witness.dims;
    if (cert.witness.bound) w["bound"] = *cert.witness.bound;
    if (!cert.witness.params.empty()) w["params"] = cert.witness.params;
    j["witness"] = w;
    if (!cert.notes.empty()) j["notes"] = cert.notes;
    j["input"] = {{"path", input_path}, {"hash", input_hash}};
    j["tool_version"] = kToolVersion;
    return j;
}

CertificateEcho certificate_from_json(const json& j) {
    CertificateEcho e;
    e.criterion = j.at("criterion").get<std::string>();
    std::string st = j.at("status").get<std::string>();
    if (st == "certified") e.status = Status::Certified;
    else if (st == "hypothesis-fails") e.status = Status::HypothesisFails;
    else if (st == "not-applicable") e.status = Status::NotApplicable;
    else throw std::invalid_argument("certificate: unknown status '" + st + "'");
    if (j.contains("witness")) {
        const json& w = j["witness"];
        if (w.contains("params"))
            for (auto it = w["params"].begin(); it != w["params"].end(); ++it) e.params[it.key()] = it.value().get<long long>();
        if (w.contains("subset")) e.subset = index_set_from_json(w["subset"]);
    }
    return e;
}

json bound_to_json(const BoundResult& b) {
    json j;
    j["method"] = b.method;
    j["applicable"] = b.applicable;
    j["lower_bound"] = b.lower_bound;
    if (b.violating_mode) j["violating_mode"] = *b.violating_mode + 1;
    if (b.mu) j["mu"] = *b.mu;
    if (b.lambda) j["lambda"] = *b.lambda;
    if (!b.params.empty()) j["params"] = b.params;
    return j;
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[24];
    std::snprintf(buf, sizeof buf, "fnv1a:%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

void write_file_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::invalid_argument("cannot write to '" + tmp + "'");
        out << content;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw std::invalid_argument("cannot rename temp file to '" + path + "'");
}

}  // namespace io
}  // namespace tensorcert
