#ifndef TENSORCERT_IO_HPP
#define TENSORCERT_IO_HPP

#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "tensorcert/criteria.hpp"
#include "tensorcert/tensor.hpp"

namespace tensorcert {
namespace io {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

using json = nlohmann::json;
using RatFamily = ProductFamily<Rationals>;
using GfFamily = ProductFamily<PrimeField>;
using RatSym = SymmetricFamily<Rationals>;
using GfSym = SymmetricFamily<PrimeField>;

/// Parsed family file: the product family plus, when a "symmetric" block is
/// present, the symmetric data it was lifted from.
struct FamilyDoc {
    std::variant<RatFamily, GfFamily> family;
    std::optional<std::variant<RatSym, GfSym>> symmetric;
};

/// Parse errors name the offending field, e.g. "tensors[2].factors[1]".
FamilyDoc parse_family_json(const json& j);
FamilyDoc load_family_file(const std::string& path);

json family_doc_to_json(const FamilyDoc& doc);

/// Reinterpret an integer-entried rational family over GF(p).
FamilyDoc reinterpret_mod_p(const FamilyDoc& doc, std::uint64_t p);

json certificate_to_json(const Certificate& cert, const std::string& input_path, const std::string& input_hash);

/// Reads criterion, status and parameters back from a certificate file (for
/// re-validation).
struct CertificateEcho {
    std::string criterion;
    Status status;
    std::map<std::string, long long> params;
    std::optional<IndexSet> subset;  // 0-based
};
CertificateEcho certificate_from_json(const json& j);

json bound_to_json(const BoundResult& b);

std::string fnv1a_hex(const std::string& data);

/// Writes text to a file atomically (temp file + rename).
void write_file_atomic(const std::string& path, const std::string& content);

/// 1-based rendering of index sets for reports.
json index_set_to_json(const IndexSet& s);
IndexSet index_set_from_json(const json& j);

}  // namespace io
}  // namespace tensorcert

#endif
