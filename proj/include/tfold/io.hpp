#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tfold/bifurcation.hpp"
#include "tfold/models.hpp"

namespace tfold::io {

using json = nlohmann::json;

inline constexpr const char* kModelSchema = "tfold.model/1";
inline constexpr const char* kReportSchema = "tfold.report/1";
inline constexpr const char* kManifestSchema = "tfold.manifest/1";

// malformed or inconsistent input files
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LoadedModel {
    std::string type;  // scalar6, scalar_general, rd
    ModelSpec spec;
    std::optional<double> nu_seed, mu_seed;
    json source;  // the parsed file after overrides
};

// overrides: key=value pairs applied to "params" (and "builtin_params" for rd models)
LoadedModel parse_model(const json& j, const std::map<std::string, double>& overrides = {});
LoadedModel load_model(const std::string& path, const std::map<std::string, double>& overrides = {});

json to_json(const TuringFoldReport& r);
TuringFoldReport report_from_json(const json& j);
json to_json(const ABCoefficients& c);
json to_json(const LandauResult& l);

json read_json(const std::string& path);
void write_json(const std::string& path, const json& j);

// CSV with a header row; numbers use 12 significant digits
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    CsvWriter& operator<<(double v);
    CsvWriter& operator<<(const std::string& s);
    void end_row();

private:
    void sep();
    std::ofstream out_;
    std::size_t cols_;
    std::size_t col_ = 0;
};

std::string fmt(double v);

// {"schema", "command", "argv", "seed", "threads", "outputs", "config"}
json make_manifest(const std::string& command, const std::vector<std::string>& argv, unsigned long long seed,
                   int threads, const json& config, const std::vector<std::string>& outputs);

}  // namespace tfold::io
