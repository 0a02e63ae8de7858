// tensorcert CLI: certify uniqueness criteria and rank bounds for families of
// product tensors, run brute-force oracles over small prime fields, and
// generate verified example instances.
//
// Exit codes: 0 certified / success, 1 hypothesis fails, 2 not applicable,
// 3 input or parameter error, 4 budget exceeded, 5 generation failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tensorcert/generators.hpp"
#include "tensorcert/io.hpp"
#include "tensorcert/oracle.hpp"

using namespace tensorcert;
using io::json;

namespace {

std::size_t subset_cap_from_env() {
    if (const char* s = std::getenv("KRUSKAL_CERT_MAX_SUBSET_N")) {
        try {
            return static_cast<std::size_t>(std::stoull(s));
        } catch (const std::exception&) {
            throw std::invalid_argument("KRUSKAL_CERT_MAX_SUBSET_N is not a valid integer");
        }
    }
    return kDefaultSubsetCap;
}

void emit(const json& j, const std::string& out_path) {
    std::string text = j.dump(2) + "\n";
    if (!out_path.empty()) io::write_file_atomic(out_path, text);
    std::cout << text;
}

int status_exit(Status s) {
    switch (s) {
        case Status::Certified: return 0;
        case Status::HypothesisFails: return 1;
        case Status::NotApplicable: return 2;
    }
    return 3;
}

oracle::GF require_gf(const io::FamilyDoc& doc) {
    if (const auto* gf = std::get_if<io::GfFamily>(&doc.family)) return gf->field;
    throw std::invalid_argument("oracle commands need a prime-field family (use --p to reinterpret integer entries)");
}

struct Options {
    std::string family_path, family_path2, out_path, criterion, name;
    std::vector<std::size_t> dims;
    std::vector<std::size_t> kranks;
    std::vector<long long> subset;
    std::vector<long long> tau;
    long long r = -1, s = -1, q = -1, l = -1, rtilde = -1;
    long long which = 0;
    long long pivot = 1;
    long long n = 3, m = 3, d = 2, k = 3;
    long long mode_i = 1;
    std::uint64_t p = 0;
    std::uint64_t seed = 1;
    std::size_t attempts = 64;
    std::uint64_t max_candidates = 4'000'000;
    std::size_t max_rank = 8;
    std::size_t rmax = 0;
    bool symmetric = false;
    bool subsets = false;
    bool rational = false;
    bool near = false;
    std::vector<std::string> methods;
};

IndexSet to_index_set(const std::vector<long long>& xs) {
    IndexSet s;
    for (auto x : xs) {
        if (x < 1) throw std::invalid_argument("indices are 1-based");
        s.push_back(static_cast<std::size_t>(x - 1));
    }
    std::sort(s.begin(), s.end());
    return s;
}

json separator_report(const std::optional<IndexSet>& sep) {
    json j;
    j["connected"] = !sep.has_value();
    j["separator"] = sep ? io::index_set_to_json(*sep) : json(nullptr);
    return j;
}

template <class F>
json term_to_json(const F& f, const ProductTensor<F>& t);

template <class F>
json solution_to_json(const F& f, const std::vector<ProductTensor<F>>& terms) {
    json out = json::array();
    for (const auto& t : terms) out.push_back(term_to_json(f, t));
    return out;
}

template <class F>
json term_to_json(const F& f, const ProductTensor<F>& t) {
    json tj;
    json fs = json::array();
    for (const auto& fac : t.factors) {
        json fj = json::array();
        for (const auto& x : fac) {
            if constexpr (F::is_prime_field) {
                fj.push_back(x);
            } else {
                (void)f;
                std::ostringstream os;
                os << x;
                fj.push_back(os.str());
            }
        }
        fs.push_back(fj);
    }
    tj["factors"] = fs;
    if constexpr (F::is_prime_field) {
        tj["coeff"] = t.coeff;
    } else {
        std::ostringstream os;
        os << t.coeff;
        tj["coeff"] = os.str();
    }
    return tj;
}

int run_check_one(const Options& opt, const std::string& family_path, const std::string& out_path) {
    std::size_t cap = subset_cap_from_env();
    io::FamilyDoc doc = io::load_family_file(family_path);
    std::string hash = io::fnv1a_hex(io::family_doc_to_json(doc).dump());

    Certificate cert;
    const std::string& cr = opt.criterion;
    if (cr == "symmetric-nonrank") {
        if (!doc.symmetric) throw std::invalid_argument("check symmetric-nonrank: family file has no 'symmetric' block");
        if (opt.r < 0) throw std::invalid_argument("check symmetric-nonrank: --r is required");
        cert = std::visit([&](const auto& sym) { return check_symmetric_nonrank(sym, opt.r); }, *doc.symmetric);
    } else {
        cert = std::visit(
            [&](const auto& fam) -> Certificate {
                if (cr == "kruskal") return check_kruskal(fam, cap);
                if (cr == "kgen") return check_kgen(fam, cap);
                if (cr == "reshaped-kgen") return check_reshaped_kgen(fam, std::nullopt, cap);
                if (cr == "reshaped-kruskal") return check_reshaped_kruskal(fam, cap);
                if (cr == "split") return check_split_corollary(fam);
                if (cr == "low-rank") {
                    if (opt.r < 0) throw std::invalid_argument("check low-rank: --r is required");
                    return check_low_rank_uniqueness(fam, opt.r, cap);
                }
                if (cr == "subpartition-interp") {
                    if (opt.s < 0 || opt.r < 0) throw std::invalid_argument("check subpartition-interp: --s and --r are required");
                    return check_subpartition_interp(fam, opt.s, opt.r, cap);
                }
                if (cr == "nonrank-irreducible") {
                    if (opt.q < 0 || opt.s < 0 || opt.r < 0)
                        throw std::invalid_argument("check nonrank-irreducible: --q, --s and --r are required");
                    return check_nonrank_irreducible(fam, opt.q, opt.s, opt.r, cap);
                }
                if (cr == "nonrank-general") {
                    if (opt.q < 0 || opt.s < 0 || opt.r < 0)
                        throw std::invalid_argument("check nonrank-general: --q, --s and --r are required");
                    return check_nonrank_general(fam, opt.q, opt.s, opt.r, cap);
                }
                if (cr == "condition-s") return check_condition_S(fam, cap);
                if (cr == "condition-h") {
                    if (opt.pivot == 0) return check_condition_H_any(fam, cap);
                    return check_condition_H(fam, opt.pivot - 1, cap);
                }
                if (cr == "condition-c") return check_condition_C(fam, opt.pivot - 1);
                if (cr == "dls-side") {
                    std::optional<std::vector<std::size_t>> tau;
                    if (!opt.tau.empty()) {
                        std::vector<std::size_t> t;
                        for (auto x : opt.tau) t.push_back(static_cast<std::size_t>(x - 1));
                        tau = t;
                    }
                    std::optional<IndexSet> sub;
                    if (!opt.subset.empty()) sub = to_index_set(opt.subset);
                    return check_dls_side_condition(fam, static_cast<int>(opt.which), tau, sub);
                }
                throw std::invalid_argument("unknown criterion '" + cr + "'");
            },
            doc.family);
    }
    emit(io::certificate_to_json(cert, family_path, hash), out_path);
    return status_exit(cert.status);
}

// Directories run in batch mode: every *.json inside gets its own
// certificate (written next to --out when given); the exit code is the worst
// per-file status.
int run_check(const Options& opt) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(opt.family_path)) return run_check_one(opt, opt.family_path, opt.out_path);
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(opt.family_path))
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw std::invalid_argument("batch check: no .json family files in '" + opt.family_path + "'");
    if (!opt.out_path.empty()) fs::create_directories(opt.out_path);
    int worst = 0;
    for (const auto& file : files) {
        std::string out = opt.out_path.empty() ? std::string()
                                               : (fs::path(opt.out_path) / (file.stem().string() + ".cert.json")).string();
        worst = std::max(worst, run_check_one(opt, file.string(), out));
    }
    return worst;
}

int run_bounds(const Options& opt) {
    std::size_t cap = subset_cap_from_env();
    io::FamilyDoc doc = io::load_family_file(opt.family_path);
    std::vector<std::string> methods = opt.methods;
    if (methods.empty()) {
        methods = {"flattening", "subset", "mu"};
        if (doc.symmetric) methods.push_back("waring");
    }
    json out;
    out["bounds"] = json::array();
    long long best = 0;
    for (const auto& mth : methods) {
        if (mth == "waring") {
            if (!doc.symmetric) throw std::invalid_argument("bounds: 'waring' needs a symmetric block");
            BoundResult b = std::visit([&](const auto& sym) { return waring_rank_lb(sym); }, *doc.symmetric);
            out["bounds"].push_back(io::bound_to_json(b));
            best = std::max(best, b.lower_bound);
            continue;
        }
        std::visit(
            [&](const auto& fam) {
                if (mth == "flattening") {
                    json j;
                    j["method"] = "flattening";
                    j["applicable"] = true;
                    j["lower_bound"] = flattening_rank_max(fam.field, family_sum(fam), fam.mode_dims);
                    out["bounds"].push_back(j);
                    best = std::max(best, j["lower_bound"].get<long long>());
                } else if (mth == "subset") {
                    BoundResult b = tensor_rank_lb_subset(fam, cap);
                    out["bounds"].push_back(io::bound_to_json(b));
                    best = std::max(best, b.lower_bound);
                } else if (mth == "mu") {
                    BoundResult b = tensor_rank_lb_mu(fam);
                    out["bounds"].push_back(io::bound_to_json(b));
                    if (b.applicable) best = std::max(best, b.lower_bound);
                } else {
                    throw std::invalid_argument("bounds: unknown method '" + mth + "'");
                }
            },
            doc.family);
    }
    out["max_lower_bound"] = best;
    emit(out, opt.out_path);
    return 0;
}

int run_report(const std::string& kind, const Options& opt) {
    std::size_t cap = subset_cap_from_env();
    io::FamilyDoc doc = io::load_family_file(opt.family_path);
    json out;
    (void)cap;
    std::visit(
        [&](const auto& fam) {
            if (kind == "kranks") {
                out["kranks"] = k_rank_profile(fam).per_mode;
            } else if (kind == "split") {
                out = separator_report(family_separator_search(fam));
            } else if (kind == "components") {
                json blocks = json::array();
                for (const auto& b : family_components(fam)) blocks.push_back(io::index_set_to_json(b));
                out["components"] = blocks;
            } else if (kind == "ears") {
                json circuits = json::array();
                for (const auto& c : ear_decomposition(fam.field, family_as_vectors(fam))) circuits.push_back(io::index_set_to_json(c));
                out["ears"] = circuits;
            }
        },
        doc.family);
    emit(out, opt.out_path);
    return 0;
}

// dims --subsets needs the full per-subset table; kept separate to avoid the
// template gymnastics above.
int run_dims(const Options& opt) {
    std::size_t cap = subset_cap_from_env();
    io::FamilyDoc doc = io::load_family_file(opt.family_path);
    json out;
    std::visit(
        [&](const auto& fam) {
            out["dims"] = mode_span_dims(fam);
            if (opt.subsets) {
                check_subset_cap(fam.n(), cap);
                DimTable<std::decay_t<decltype(fam.field)>> dt(fam);
                json rows = json::array();
                for_each_subset_sized(fam.n(), 1, fam.n(), [&](const IndexSet& s) {
                    json row;
                    row["subset"] = io::index_set_to_json(s);
                    std::vector<std::size_t> ds;
                    for (std::size_t j = 0; j < fam.m(); ++j) ds.push_back(dt.query_mode(s, j));
                    row["dims"] = ds;
                    rows.push_back(row);
                });
                out["subset_dims"] = rows;
            }
        },
        doc.family);
    emit(out, opt.out_path);
    return 0;
}

int run_dls_threshold(const Options& opt) {
    io::FamilyDoc doc = io::load_family_file(opt.family_path);
    json out;
    out["dls_threshold"] = std::visit([](const auto& fam) { return dls_threshold(fam); }, doc.family);
    emit(out, opt.out_path);
    return 0;
}

int run_revalidate(const Options& opt) {
    std::ifstream in(opt.family_path);  // first positional: certificate
    if (!in) throw std::invalid_argument("cannot open certificate '" + opt.family_path + "'");
    json cj;
    in >> cj;
    io::CertificateEcho echo = io::certificate_from_json(cj);
    io::FamilyDoc doc = io::load_family_file(opt.family_path2);
    Certificate cert;
    cert.criterion = echo.criterion;
    cert.status = echo.status;
    cert.witness.params = echo.params;
    cert.witness.subset = echo.subset;
    bool ok = std::visit([&](const auto& fam) { return revalidate(cert, fam, subset_cap_from_env()); }, doc.family);
    json out;
    out["reproduced"] = ok;
    emit(out, opt.out_path);
    return ok ? 0 : 1;
}

io::FamilyDoc load_for_oracle(const Options& opt, const std::string& path) {
    io::FamilyDoc doc = io::load_family_file(path);
    if (opt.p != 0 && std::holds_alternative<io::RatFamily>(doc.family)) doc = io::reinterpret_mod_p(doc, opt.p);
    return doc;
}

int run_oracle(const std::string& kind, const Options& opt) {
    oracle::SearchBudget budget;
    budget.max_candidates = opt.max_candidates;
    budget.max_rank = opt.max_rank;
    json out;
    if (kind == "subpartition") {
        io::FamilyDoc dx = load_for_oracle(opt, opt.family_path);
        io::FamilyDoc dy = load_for_oracle(opt, opt.family_path2);
        if (opt.s < 1 || opt.l < 1) throw std::invalid_argument("oracle subpartition: --s and --l are required");
        auto rep = std::visit(
            [&](const auto& fx) {
                using FamT = std::decay_t<decltype(fx)>;
                const auto& fy = std::get<FamT>(dy.family);
                return oracle::subpartition_verify(fx, fy, opt.s, opt.l, budget);
            },
            dx.family);
        out["found"] = rep.witness.has_value();
        if (rep.witness) {
            json q = json::array(), r = json::array();
            for (const auto& b : rep.witness->q_blocks) q.push_back(io::index_set_to_json(b));
            for (const auto& b : rep.witness->r_blocks) r.push_back(io::index_set_to_json(b));
            out["q_blocks"] = q;
            out["r_blocks"] = r;
        }
        out["reducible"] = rep.reducible;
        out["budget_used"] = rep.nodes_used;
        emit(out, opt.out_path);
        return 0;
    }

    io::FamilyDoc doc = load_for_oracle(opt, opt.family_path);
    if (kind == "unique" && opt.symmetric) {
        if (!doc.symmetric) throw std::invalid_argument("oracle unique --symmetric: family file has no 'symmetric' block");
        const auto* sym = std::get_if<io::GfSym>(&*doc.symmetric);
        if (!sym) throw std::invalid_argument("oracle unique: needs a prime-field symmetric family");
        auto rep = oracle::symmetric_uniqueness_bruteforce(*sym, opt.rmax, budget);
        out["unique"] = rep.unique;
        out["family_found"] = rep.family_found;
        if (rep.other) out["other"] = solution_to_json(sym->field, *rep.other);
        out["budget_used"] = rep.nodes_used;
        emit(out, opt.out_path);
        return 0;
    }

    oracle::GF f = require_gf(doc);
    const auto& fam = std::get<io::GfFamily>(doc.family);
    if (kind == "rank") {
        auto rep = oracle::brute_force_rank(f, family_sum(fam), fam.mode_dims, budget);
        if (rep.exact) out["rank"] = *rep.exact;
        else out["rank"] = nullptr;
        out["lower_bound"] = rep.lower_bound;
        out["budget_used"] = rep.nodes_used;
    } else if (kind == "decomps") {
        if (opt.r < 0) throw std::invalid_argument("oracle decomps: --r is required");
        auto set = oracle::all_decompositions(f, family_sum(fam), fam.mode_dims, opt.r, budget);
        json sols = json::array();
        for (const auto& s : set.solutions) sols.push_back(solution_to_json(f, s));
        out["count"] = set.solutions.size();
        out["solutions"] = sols;
        out["budget_used"] = set.nodes_used;
    } else if (kind == "unique") {
        if (opt.rmax == 0) throw std::invalid_argument("oracle unique: --rmax is required");
        auto rep = oracle::uniqueness_bruteforce(fam, opt.rmax, budget);
        out["unique"] = rep.unique;
        out["family_found"] = rep.family_found;
        if (rep.other) out["other"] = solution_to_json(f, *rep.other);
        out["budget_used"] = rep.nodes_used;
    } else if (kind == "condition-u") {
        auto rep = oracle::condition_U_bruteforce(fam, budget);
        out["holds"] = rep.holds;
        if (rep.violating_alpha) out["violating_alpha"] = *rep.violating_alpha;
        out["budget_used"] = rep.nodes_used;
    } else if (kind == "condition-3c") {
        auto rep = oracle::condition_3c_bruteforce(fam, to_index_set(opt.subset), budget);
        out["holds"] = rep.holds;
        if (rep.violating_alpha) out["violating_alpha"] = *rep.violating_alpha;
        out["budget_used"] = rep.nodes_used;
    } else if (kind == "rank-deficient") {
        if (opt.rtilde < 1) throw std::invalid_argument("oracle rank-deficient: --rtilde is required");
        auto rep = oracle::rank_deficient_subset_search(fam, opt.rtilde, budget);
        out["found"] = rep.subset.has_value();
        if (rep.subset) out["subset"] = io::index_set_to_json(*rep.subset);
        out["budget_used"] = rep.nodes_used;
    } else {
        throw std::invalid_argument("unknown oracle subcommand '" + kind + "'");
    }
    emit(out, opt.out_path);
    return 0;
}

template <class F>
json scalar_json(const F&, const typename F::Elem& x) {
    if constexpr (F::is_prime_field) {
        return json(x);
    } else {
        std::ostringstream os;
        os << x;
        return json(os.str());
    }
}

template <class F>
json instance_to_json(const F& f, const SharpnessInstance<F>& inst) {
    json j;
    j["instance"] = "sharp-tensor";
    io::FamilyDoc e{inst.e_family, std::nullopt}, ff{inst.f_family, std::nullopt};
    j["E"] = io::family_doc_to_json(e);
    j["F"] = io::family_doc_to_json(ff);
    json ec = json::array(), fc = json::array();
    for (const auto& c : inst.e_coeffs) ec.push_back(scalar_json(f, c));
    for (const auto& c : inst.f_coeffs) fc.push_back(scalar_json(f, c));
    j["relation"] = {{"e_coeffs", ec}, {"f_coeffs", fc}};
    j["params"] = inst.params;
    j["near_sharp"] = inst.near_sharp;
    return j;
}

template <class F>
json sym_instance_to_json(const F&, const SymmetricSharpnessInstance<F>& inst) {
    json j;
    j["instance"] = "sharp-symmetric";
    io::FamilyDoc e{symmetric_lift(inst.e_family), inst.e_family};
    io::FamilyDoc ff{symmetric_lift(inst.f_family), inst.f_family};
    j["E"] = io::family_doc_to_json(e);
    j["F"] = io::family_doc_to_json(ff);
    j["params"] = inst.params;
    j["near_sharp"] = inst.near_sharp;
    return j;
}

int run_generate(const std::string& kind, const Options& opt) {
    // sharp-symmetric defaults to the rationals; everything else to GF(101)
    bool use_rational = opt.rational || (kind == "sharp-symmetric" && opt.p == 0);
    auto with_field = [&](auto&& fn) -> int {
        if (use_rational) {
            Rationals f;
            return fn(f);
        }
        PrimeField f(opt.p == 0 ? 101 : opt.p);
        return fn(f);
    };
    if (kind == "fixture") {
        return with_field([&](const auto& f) {
            auto fam = make_fixture(f, opt.name, opt.n, opt.m);
            fixture_selfcheck(f, opt.name, fam);
            io::FamilyDoc doc{fam, std::nullopt};
            emit(io::family_doc_to_json(doc), opt.out_path);
            return 0;
        });
    }
    if (kind == "circuit") {
        return with_field([&](const auto& f) {
            CircuitSpec spec(opt.dims, opt.symmetric);
            auto fam = find_circuit(f, spec, opt.attempts, opt.seed);
            if (!fam)
                throw generation_failure("circuit search failed after " + std::to_string(opt.attempts) + " attempts");
            io::FamilyDoc doc{*fam, std::nullopt};
            emit(io::family_doc_to_json(doc), opt.out_path);
            return 0;
        });
    }
    if (kind == "sharp-tensor") {
        return with_field([&](const auto& f) {
            using FT = std::decay_t<decltype(f)>;
            if (opt.kranks.empty() || opt.dims.empty())
                throw std::invalid_argument("generate sharp-tensor: --kranks and --dims are required");
            CircuitSpec cspec(std::vector<std::size_t>(opt.kranks));
            auto circ = find_circuit(f, cspec, opt.attempts, opt.seed);
            if (!circ) throw generation_failure("circuit search failed");
            SharpnessInstance<FT> inst =
                build_sharpness_tensor_instance(f, *circ, opt.dims, opt.mode_i - 1, opt.n, opt.seed, opt.attempts);
            emit(instance_to_json(f, inst), opt.out_path);
            return 0;
        });
    }
    if (kind == "sharp-symmetric") {
        return with_field([&](const auto& f) {
            using FT = std::decay_t<decltype(f)>;
            SymmetricSharpnessInstance<FT> inst =
                opt.near ? build_sharpness_symmetric_near(f, opt.m, opt.d, opt.k, opt.seed, opt.attempts)
                         : build_sharpness_symmetric_instance(f, opt.m, opt.d, opt.n, opt.r, opt.seed, opt.attempts);
            emit(sym_instance_to_json(f, inst), opt.out_path);
            return 0;
        });
    }
    throw std::invalid_argument("unknown generate subcommand '" + kind + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact certification of tensor rank decomposition uniqueness, rank lower bounds, and product-tensor matroid structure"};
    app.require_subcommand(1);
    Options opt;
    std::string mode, sub;

    auto add_family_arg = [&](CLI::App* c) { c->add_option("family", opt.family_path, "family JSON file (or a directory of them for check)")->required(); };
    auto add_out = [&](CLI::App* c) { c->add_option("--out", opt.out_path, "also write the JSON output to this path"); };

    CLI::App* check = app.add_subcommand("check", "evaluate a uniqueness criterion");
    check->add_option("criterion", opt.criterion,
                      "kruskal | kgen | reshaped-kgen | reshaped-kruskal | split | low-rank | subpartition-interp | "
                      "nonrank-irreducible | nonrank-general | symmetric-nonrank | condition-s | condition-h | "
                      "condition-c | dls-side")
        ->required();
    add_family_arg(check);
    check->add_option("--r", opt.r, "rank parameter r");
    check->add_option("--s", opt.s, "block size parameter s");
    check->add_option("--q", opt.q, "matched-subset size parameter q");
    check->add_option("--pivot", opt.pivot, "pivot mode (1-based; 0 = try all)");
    check->add_option("--which", opt.which, "DLS side condition number (1, 3, 4 or 5)");
    check->add_option("--tau", opt.tau, "permutation for dls-side 4 (1-based)");
    check->add_option("--subset", opt.subset, "subset for dls-side 3 (1-based)")->delimiter(',');
    add_out(check);

    CLI::App* bounds = app.add_subcommand("bounds", "tabulate rank lower bounds");
    add_family_arg(bounds);
    bounds->add_option("--methods", opt.methods, "subset of {flattening, subset, mu, waring}");
    add_out(bounds);

    CLI::App* split = app.add_subcommand("split", "search for a separator of the assembled family");
    add_family_arg(split);
    add_out(split);
    CLI::App* components = app.add_subcommand("components", "connected components of the assembled family");
    add_family_arg(components);
    add_out(components);
    CLI::App* ears = app.add_subcommand("ears", "ear decomposition of a connected family");
    add_family_arg(ears);
    add_out(ears);
    CLI::App* kranks = app.add_subcommand("kranks", "per-mode Kruskal ranks");
    add_family_arg(kranks);
    add_out(kranks);
    CLI::App* dims = app.add_subcommand("dims", "per-mode span dimensions");
    add_family_arg(dims);
    dims->add_flag("--subsets", opt.subsets, "dump d_j^S for every subset S (exponential)");
    add_out(dims);
    CLI::App* dlst = app.add_subcommand("dls-threshold", "k-rank-large regime test (DLS criteria inapplicable)");
    add_family_arg(dlst);
    add_out(dlst);

    CLI::App* reval = app.add_subcommand("revalidate", "recompute a certificate's status from its witness data");
    reval->add_option("certificate", opt.family_path, "certificate JSON file")->required();
    reval->add_option("family", opt.family_path2, "family JSON file")->required();
    add_out(reval);

    CLI::App* orc = app.add_subcommand("oracle", "budgeted brute force over small prime fields");
    orc->require_subcommand(1);
    for (const char* name : {"rank", "decomps", "unique", "condition-u", "condition-3c", "rank-deficient"}) {
        CLI::App* c = orc->add_subcommand(name);
        add_family_arg(c);
        c->add_option("--p", opt.p, "reinterpret integer entries over GF(p)");
        c->add_option("--max-candidates", opt.max_candidates, "enumeration budget");
        c->add_option("--max-rank", opt.max_rank, "largest rank tried");
        c->add_option("--r", opt.r, "decomposition size bound");
        c->add_option("--rmax", opt.rmax, "uniqueness search bound");
        c->add_option("--rtilde", opt.rtilde, "rank deficiency threshold");
        c->add_option("--subset", opt.subset, "subset S (1-based)")->delimiter(',');
        c->add_flag("--symmetric", opt.symmetric, "restrict to symmetric decompositions");
        add_out(c);
    }
    {
        CLI::App* c = orc->add_subcommand("subpartition");
        c->add_option("familyX", opt.family_path, "first decomposition")->required();
        c->add_option("familyY", opt.family_path2, "second decomposition")->required();
        c->add_option("--p", opt.p, "reinterpret integer entries over GF(p)");
        c->add_option("--s", opt.s, "max Q-block size")->required();
        c->add_option("--l", opt.l, "number of blocks")->required();
        c->add_option("--max-candidates", opt.max_candidates, "enumeration budget");
        add_out(c);
    }

    CLI::App* gen = app.add_subcommand("generate", "emit verified instance files");
    gen->require_subcommand(1);
    {
        CLI::App* c = gen->add_subcommand("fixture");
        c->add_option("name", opt.name, "identity | example_8_1 | bound_four | bound_five | ex_independent")->required();
        c->add_option("--n", opt.n, "tensors (identity fixture)");
        c->add_option("--m", opt.m, "modes (identity fixture)");
        c->add_option("--p", opt.p, "prime field (default GF(101))");
        c->add_flag("--rational", opt.rational, "build over the rationals");
        add_out(c);
    }
    {
        CLI::App* c = gen->add_subcommand("circuit");
        c->add_option("--dims", opt.dims, "per-mode dimensions")->required()->delimiter(',');
        c->add_option("--p", opt.p, "prime field (default GF(101))");
        c->add_flag("--rational", opt.rational, "search over the rationals");
        c->add_flag("--symmetric", opt.symmetric, "symmetric circuit (equal dims)");
        c->add_option("--attempts", opt.attempts, "search attempts");
        c->add_option("--seed", opt.seed, "PRNG seed");
        add_out(c);
    }
    {
        CLI::App* c = gen->add_subcommand("sharp-tensor");
        c->add_option("--kranks", opt.kranks, "target k-ranks k_j")->required()->delimiter(',');
        c->add_option("--dims", opt.dims, "target spans d_j")->required()->delimiter(',');
        c->add_option("--mode-i", opt.mode_i, "distinguished mode i (1-based)");
        c->add_option("--n", opt.n, "family size n")->required();
        c->add_option("--p", opt.p, "prime field (default GF(101))");
        c->add_flag("--rational", opt.rational, "build over the rationals");
        c->add_option("--attempts", opt.attempts, "resampling attempts");
        c->add_option("--seed", opt.seed, "PRNG seed");
        add_out(c);
    }
    {
        CLI::App* c = gen->add_subcommand("sharp-symmetric");
        c->add_option("--m", opt.m, "power m")->required();
        c->add_option("--d", opt.d, "span d")->required();
        c->add_option("--n", opt.n, "terms n");
        c->add_option("--r", opt.r, "terms r");
        c->add_option("--k", opt.k, "k-rank for the near-sharp variant");
        c->add_flag("--near", opt.near, "build the k-rank-pinned near-sharp variant");
        c->add_option("--p", opt.p, "prime field (default: rationals)");
        c->add_option("--attempts", opt.attempts, "search attempts");
        c->add_option("--seed", opt.seed, "PRNG seed");
        add_out(c);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return run_check(opt);
        if (bounds->parsed()) return run_bounds(opt);
        if (split->parsed()) return run_report("split", opt);
        if (components->parsed()) return run_report("components", opt);
        if (ears->parsed()) return run_report("ears", opt);
        if (kranks->parsed()) return run_report("kranks", opt);
        if (dims->parsed()) return run_dims(opt);
        if (dlst->parsed()) return run_dls_threshold(opt);
        if (reval->parsed()) return run_revalidate(opt);
        if (orc->parsed()) {
            for (auto* c : orc->get_subcommands())
                if (c->parsed()) return run_oracle(c->get_name(), opt);
        }
        if (gen->parsed()) {
            for (auto* c : gen->get_subcommands())
                if (c->parsed()) return run_generate(c->get_name(), opt);
        }
    } catch (const budget_exceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const generation_failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    std::cerr << "no subcommand given\n";
    return 3;
}
