#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "msflow/parallel.hpp"

namespace msflow {

/// Ordered `key=value` pairs. Blank lines and lines starting with '#' are
/// ignored; surrounding whitespace is trimmed; duplicate keys are an error.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(std::istream& in);
KeyValues read_key_values(const std::filesystem::path& path);

double parse_real(const std::string& text, const std::string& key);
int parse_int(const std::string& text, const std::string& key);

/// Model file: mu0=, sigma0=, c=, L= with '.' as decimal separator.
void write_model(const ConfidenceModel& model, std::ostream& out);
void save_model(const ConfidenceModel& model, const std::filesystem::path& path);
ConfidenceModel model_from_key_values(const KeyValues& kv);
ConfidenceModel load_model(const std::filesystem::path& path);

}  // namespace msflow
