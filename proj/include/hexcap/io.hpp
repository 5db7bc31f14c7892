#ifndef HEXCAP_IO_HPP
#define HEXCAP_IO_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "hexcap/branch.hpp"
#include "hexcap/geom.hpp"

namespace hexcap {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using json = nlohmann::json;

struct SolutionFile {
    ModelParams params;
    Sequence u;
    std::optional<double> residual;
    std::optional<std::uint64_t> seed;
};

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

// FNV-1a 64, as 16 hex digits.
std::string digest(const std::string& bytes);

json to_json(const ModelParams& p);
ModelParams params_from_json(const json& j);

json to_json(const SolutionFile& s);
SolutionFile solution_from_json(const json& j);

json to_json(const Certificate& c);
Certificate certificate_from_json(const json& j);

json to_json(const ChebBranch& b);
ChebBranch branch_from_json(const json& j);

json to_json(const BranchCertificate& c);
BranchCertificate branch_certificate_from_json(const json& j);

// Parses text and wraps every failure in IoError.
json parse_json(const std::string& text, const std::string& what);

std::string to_csv(const std::vector<GridRow>& rows);

} // namespace hexcap

#endif
