#pragma once

#include "cquartet/morph.hpp"
#include "cquartet/observables.hpp"
#include "cquartet/patterns.hpp"
#include "cquartet/simulate.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace cquartet {

// Key/value pairs written as "# key: value" lines ahead of the CSV header.
using Provenance = std::vector<std::pair<std::string, std::string>>;

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view text);

// Header "unit,x,tau"; units numbered from 1; "\n" line endings.
std::string effects_csv(const EffectVector& v, const Provenance& provenance = {});
// Header "unit,x,y0,y1".
std::string observables_csv(const ObservableSet& o, const Provenance& provenance = {});

EffectVector parse_effects_csv(std::string_view text);
ObservableSet parse_observables_csv(std::string_view text);

void write_text(const std::filesystem::path& path, std::string_view contents);
std::string read_text(const std::filesystem::path& path);

void write_csv(const EffectVector& v, const std::filesystem::path& path, const Provenance& provenance = {});
void write_csv(const ObservableSet& o, const std::filesystem::path& path, const Provenance& provenance = {});

// An "ate" comment restores the target average; otherwise the mean of tau
// is used.
EffectVector read_effects_csv(const std::filesystem::path& path);
ObservableSet read_observables_csv(const std::filesystem::path& path);

// Predictor values: one number per line, or a CSV whose header names an
// "x" column. Blank lines and "#" comments are skipped.
std::vector<double> read_x_file(const std::filesystem::path& path);

nlohmann::ordered_json to_json(const EffectVector& v);
nlohmann::ordered_json to_json(const ObservableSet& o);
nlohmann::ordered_json to_json(const SimSummary& s);
nlohmann::ordered_json to_json(const MorphResult& r);

}  // namespace cquartet
