#include "cquartet/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cquartet {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

std::vector<std::string_view> lines_of(std::string_view text)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start < text.size()) {
        auto pos = text.find('\n', start);
        if (pos == std::string_view::npos)
            pos = text.size();
        out.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

void write_provenance(std::ostringstream& os, const Provenance& provenance)
{
    for (const auto& [key, value] : provenance) {
        std::string flat = value;
        for (auto& c : flat)
            if (c == '\n' || c == '\r')
                c = ' ';
        os << "# " << key << ": " << flat << '\n';
    }
}

// Comment lines parsed as "# key: value"; data rows split on commas.
struct CsvTable {
    Provenance comments;
    std::vector<std::string_view> header;
    std::vector<std::vector<std::string_view>> rows;
};

CsvTable parse_table(std::string_view text, const std::vector<std::string_view>& expected_header)
{
    CsvTable t;
    for (std::string_view raw : lines_of(text)) {
        const std::string_view line = trim(raw);
        if (line.empty())
            continue;
        if (line.front() == '#') {
            const std::string_view body = trim(line.substr(1));
            const auto colon = body.find(':');
            if (colon != std::string_view::npos)
                t.comments.emplace_back(std::string(trim(body.substr(0, colon))),
                                        std::string(trim(body.substr(colon + 1))));
            continue;
        }
        auto fields = split(line, ',');
        if (t.header.empty()) {
            if (fields != expected_header)
                throw std::runtime_error("unexpected CSV header '" + std::string(line) + "'");
            t.header = std::move(fields);
            continue;
        }
        if (fields.size() != t.header.size())
            throw std::runtime_error("CSV row has " + std::to_string(fields.size()) + " fields, expected " +
                                     std::to_string(t.header.size()));
        t.rows.push_back(std::move(fields));
    }
    if (t.header.empty())
        throw std::runtime_error("CSV has no header");
    return t;
}

std::optional<double> comment_number(const Provenance& comments, std::string_view key)
{
    for (const auto& [k, v] : comments)
        if (k == key)
            return parse_double(v);
    return std::nullopt;
}

template <class Fn>
auto with_path(const std::filesystem::path& path, Fn&& fn)
{
    try {
        return fn();
    } catch (const std::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

nlohmann::ordered_json optional_number(const std::optional<double>& v)
{
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

std::string format_double(double v)
{
    if (!std::isfinite(v))
        throw std::invalid_argument("cannot serialise a non-finite value");
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text)
{
    text = trim(text);
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw std::runtime_error("not a number: '" + std::string(text) + "'");
    return v;
}

std::string effects_csv(const EffectVector& v, const Provenance& provenance)
{
    std::ostringstream os;
    write_provenance(os, provenance);
    os << "unit,x,tau\n";
    for (std::size_t i = 0; i < v.units.size(); ++i)
        os << (i + 1) << ',' << format_double(v.units[i].x) << ',' << format_double(v.units[i].tau) << '\n';
    return os.str();
}

std::string observables_csv(const ObservableSet& o, const Provenance& provenance)
{
    std::ostringstream os;
    write_provenance(os, provenance);
    os << "unit,x,y0,y1\n";
    for (std::size_t i = 0; i < o.units.size(); ++i) {
        const auto& u = o.units[i];
        os << (i + 1) << ',' << format_double(u.x) << ',' << format_double(u.y0) << ','
           << format_double(u.y1) << '\n';
    }
    return os.str();
}

EffectVector parse_effects_csv(std::string_view text)
{
    const CsvTable t = parse_table(text, {"unit", "x", "tau"});
    EffectVector v;
    for (const auto& row : t.rows)
        v.units.push_back({parse_double(row[1]), parse_double(row[2])});
    if (v.units.empty())
        throw std::runtime_error("CSV has no data rows");
    const auto ate = comment_number(t.comments, "ate");
    v.ate = ate ? *ate : mean_effect(v);
    for (const auto& [k, val] : t.comments)
        if (k == "pattern")
            v.pattern = parse_pattern(val);
    return v;
}

ObservableSet parse_observables_csv(std::string_view text)
{
    const CsvTable t = parse_table(text, {"unit", "x", "y0", "y1"});
    ObservableSet o;
    for (const auto& row : t.rows)
        o.units.push_back({parse_double(row[1]), parse_double(row[2]), parse_double(row[3])});
    if (o.units.empty())
        throw std::runtime_error("CSV has no data rows");
    const auto ate = comment_number(t.comments, "ate");
    o.source_ate = ate ? *ate : mean_difference(o);
    return o;
}

void write_text(const std::filesystem::path& path, std::string_view contents)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error(path.string() + ": cannot open for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out)
        throw std::runtime_error(path.string() + ": write failed");
}

std::string read_text(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error(path.string() + ": cannot open for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_csv(const EffectVector& v, const std::filesystem::path& path, const Provenance& provenance)
{
    write_text(path, effects_csv(v, provenance));
}

void write_csv(const ObservableSet& o, const std::filesystem::path& path, const Provenance& provenance)
{
    write_text(path, observables_csv(o, provenance));
}

EffectVector read_effects_csv(const std::filesystem::path& path)
{
    const std::string text = read_text(path);
    return with_path(path, [&] { return parse_effects_csv(text); });
}

ObservableSet read_observables_csv(const std::filesystem::path& path)
{
    const std::string text = read_text(path);
    return with_path(path, [&] { return parse_observables_csv(text); });
}

std::vector<double> read_x_file(const std::filesystem::path& path)
{
    const std::string text = read_text(path);
    return with_path(path, [&] {
        std::vector<double> xs;
        std::optional<std::size_t> column;
        bool first = true;
        for (std::string_view raw : lines_of(text)) {
            const std::string_view line = trim(raw);
            if (line.empty() || line.front() == '#')
                continue;
            const auto fields = split(line, ',');
            if (first) {
                first = false;
                double probe = 0.0;
                const auto res = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), probe);
                if (res.ec != std::errc() || res.ptr != fields[0].data() + fields[0].size()) {
                    for (std::size_t i = 0; i < fields.size(); ++i)
                        if (fields[i] == "x")
                            column = i;
                    if (!column)
                        throw std::runtime_error("header has no 'x' column");
                    continue;
                }
            }
            const std::size_t c = column.value_or(0);
            if (c >= fields.size())
                throw std::runtime_error("row is missing the x column");
            xs.push_back(parse_double(fields[c]));
        }
        if (xs.empty())
            throw std::runtime_error("no x values");
        return xs;
    });
}

nlohmann::ordered_json to_json(const EffectVector& v)
{
    nlohmann::ordered_json j;
    j["ate"] = v.ate;
    j["pattern"] = v.pattern ? nlohmann::ordered_json(std::string(1, pattern_letter(*v.pattern)))
                             : nlohmann::ordered_json(nullptr);
    j["scale"] = optional_number(v.scale);
    auto& units = j["units"] = nlohmann::ordered_json::array();
    for (const auto& u : v.units)
        units.push_back({{"x", u.x}, {"tau", u.tau}});
    return j;
}

nlohmann::ordered_json to_json(const ObservableSet& o)
{
    nlohmann::ordered_json j;
    j["source_ate"] = o.source_ate;
    auto& units = j["units"] = nlohmann::ordered_json::array();
    for (const auto& u : o.units)
        units.push_back({{"x", u.x}, {"y0", u.y0}, {"y1", u.y1}});
    return j;
}

nlohmann::ordered_json to_json(const SimSummary& s)
{
    nlohmann::ordered_json j;
    j["empirical_power"] = s.empirical_power;
    j["mean_estimate"] = s.mean_estimate;
    j["mean_significant_estimate"] = optional_number(s.mean_significant_estimate);
    j["mean_significant_abs_estimate"] = optional_number(s.mean_significant_abs_estimate);
    j["sign_error_rate_among_significant"] = optional_number(s.sign_error_rate_among_significant);
    j["reps_used"] = s.reps_used;
    j["significant_reps"] = s.significant_reps;
    j["no_significant_reps"] = !s.any_significant();
    j["mc_standard_error"] = s.mc_standard_error;
    j["true_ate"] = s.true_ate;
    return j;
}

nlohmann::ordered_json to_json(const MorphResult& r)
{
    static constexpr const char* kStatus[] = {"improved", "at_target", "no_progress"};
    nlohmann::ordered_json j;
    j["status"] = kStatus[static_cast<int>(r.status)];
    j["initial_distance"] = r.initial_distance;
    j["final_distance"] = r.final_distance;
    j["reduction"] = r.reduction();
    j["accepted"] = r.accepted;
    j["constraint_violations"] = r.constraint_violations;
    j["result"] = to_json(r.best);
    return j;
}

}  // namespace cquartet
