#include "cquartet/cli.hpp"

#include "cquartet/design.hpp"
#include "cquartet/io.hpp"
#include "cquartet/morph.hpp"
#include "cquartet/observables.hpp"
#include "cquartet/patterns.hpp"
#include "cquartet/render.hpp"
#include "cquartet/simulate.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <array>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

namespace cquartet::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr std::array<PatternKind, 4> kLatentKinds{PatternKind::constant, PatternKind::low_variation,
                                                  PatternKind::high_variation, PatternKind::occasional_large};
constexpr std::array<PatternKind, 4> kInteractionKinds{PatternKind::linear, PatternKind::threshold,
                                                       PatternKind::plateau, PatternKind::sweet_spot};

std::string caption(PatternKind k)
{
    std::string s(pattern_name(k));
    std::replace(s.begin(), s.end(), '_', ' ');
    return s;
}

struct Formats {
    bool svg = false;
    bool csv = false;
    bool json = false;
};

Formats parse_formats(const std::string& text)
{
    Formats f;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "svg")
            f.svg = true;
        else if (item == "csv")
            f.csv = true;
        else if (item == "json")
            f.json = true;
        else
            throw std::invalid_argument("unknown format '" + item + "'");
    }
    if (!f.svg && !f.csv && !f.json)
        throw std::invalid_argument("at least one output format is required");
    return f;
}

const CLI::Validator kFormatList(
    [](std::string& value) -> std::string {
        try {
            parse_formats(value);
        } catch (const std::exception& e) {
            return e.what();
        }
        return {};
    },
    "svg,csv,json", "FormatList");

struct Common {
    double ate = 0.1;
    std::size_t n = 11;
    std::string x_file;
    std::uint64_t seed = 0;
    std::string out = ".";
    std::string format = "svg,csv";
    std::string config;
};

void add_common(CLI::App* sub, Common& c)
{
    sub->add_option("--ate", c.ate, "Average treatment effect");
    sub->add_option("--n", c.n, "Number of units or grid points")->check(CLI::PositiveNumber);
    sub->add_option("--x-file", c.x_file, "File of predictor values (one per line, or CSV with an x column)")
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", c.seed, "Random seed");
    sub->add_option("--out", c.out, "Output directory");
    sub->add_option("--format", c.format, "Comma-separated output formats: svg, csv, json")->check(kFormatList);
    sub->add_option("--config", c.config, "JSON file of flag values; flags on the command line win");
}

struct ShapeFlags {
    double p_nonzero = 0.1;
    double spread = 1.0;
    double sd_factor = 2.5;
    double jitter = 0.0;
    std::optional<double> slope;
    std::optional<double> threshold;
    std::optional<double> plateau_start;
    std::optional<double> cap;
    std::optional<double> center;
    std::optional<double> width;

    PatternSpec spec(PatternKind kind, std::uint64_t seed) const
    {
        PatternSpec s;
        s.kind = kind;
        s.seed = seed;
        s.p_nonzero = p_nonzero;
        s.spread = spread;
        s.sd_factor = sd_factor;
        s.jitter = jitter;
        s.slope = slope;
        s.threshold = kind == PatternKind::plateau ? plateau_start : threshold;
        s.cap = cap;
        s.center = center;
        s.width = width;
        return s;
    }
};

void add_latent_flags(CLI::App* sub, ShapeFlags& f)
{
    sub->add_option("--p-nonzero", f.p_nonzero, "(d) share of units with a nonzero effect");
    sub->add_option("--spread", f.spread, "(b) relative half-width of effects around the ate, in [0, 1]");
    sub->add_option("--sd-factor", f.sd_factor, "(c) effect sd as a multiple of |ate|");
    sub->add_option("--jitter", f.jitter, "(d) relative sd of mean-preserving noise on nonzero effects");
}

void add_interaction_flags(CLI::App* sub, ShapeFlags& f)
{
    sub->add_option("--slope", f.slope, "(e) slope in x; default spans 2*ate across the x range");
    sub->add_option("--threshold", f.threshold, "(f) x where the effect starts; default grid midpoint");
    sub->add_option("--plateau-start", f.plateau_start, "(g) x where the effect starts; default min + 0.3 range");
    sub->add_option("--cap", f.cap, "(g) plateau height, > 0; default 1.8*|ate|");
    sub->add_option("--center", f.center, "(h) bump centre; default median grid point");
    sub->add_option("--width", f.width, "(h) bump width; default range/6");
}

std::string flatten_config(const CLI::App* sub)
{
    std::string text = sub->config_to_str(true, false);
    std::string flat;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty() || line.front() == '[' || line.front() == '#')
            continue;
        // Where the files go, and which file supplied the values, do not
        // change their contents.
        if (line.rfind("out=", 0) == 0 || line.rfind("config=", 0) == 0)
            continue;
        if (!flat.empty())
            flat += ' ';
        flat += line;
    }
    return flat;
}

struct RunContext {
    std::string command;
    std::string flags;
    std::uint64_t seed = 0;

    Provenance provenance(std::optional<double> ate = std::nullopt,
                          std::optional<PatternKind> pattern = std::nullopt) const
    {
        Provenance p{{"command", command}, {"flags", flags}, {"seed", std::to_string(seed)}};
        if (ate)
            p.emplace_back("ate", format_double(*ate));
        if (pattern)
            p.emplace_back("pattern", std::string(1, pattern_letter(*pattern)));
        return p;
    }

    json provenance_json() const
    {
        return json{{"command", command}, {"flags", flags}, {"seed", seed}};
    }

    std::string description() const { return "cquartet " + command + "; " + flags; }
};

fs::path prepare_out(const std::string& dir)
{
    fs::path p(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec)
        throw std::runtime_error(dir + ": cannot create output directory: " + ec.message());
    return p;
}

std::vector<double> grid_for(const Common& c, bool interaction)
{
    if (!c.x_file.empty())
        return read_x_file(c.x_file);
    return interaction ? even_grid(c.n, 0.0, 1.0) : index_grid(c.n);
}

std::array<EffectVector, 4> make_quartet(const std::array<PatternKind, 4>& kinds, std::span<const double> x,
                                         double ate, const ShapeFlags& flags, std::uint64_t seed)
{
    std::array<EffectVector, 4> out;
    for (std::size_t i = 0; i < 4; ++i)
        out[i] = generate(flags.spec(kinds[i], seed), x, ate);
    return out;
}

template <class Data>
QuartetLayout layout_of(const std::array<PatternKind, 4>& kinds, const std::array<Data, 4>& data, double ate,
                        const std::string& title, const RunContext& ctx)
{
    QuartetLayout q;
    for (std::size_t i = 0; i < 4; ++i)
        q.panels[i] = Panel{std::string(1, pattern_letter(kinds[i])), caption(kinds[i]), data[i]};
    q.ate = ate;
    q.title = title;
    q.description = ctx.description();
    return q;
}

void emit_effect_quartet(const std::string& stem, const std::array<PatternKind, 4>& kinds,
                         const std::array<EffectVector, 4>& vs, double ate, const Formats& f,
                         const fs::path& out, const RunContext& ctx, const std::string& title)
{
    if (f.svg)
        write_text(out / (stem + "_quartet.svg"), render_quartet(layout_of(kinds, vs, ate, title, ctx)));
    if (f.csv)
        for (std::size_t i = 0; i < 4; ++i)
            write_csv(vs[i], out / (stem + "_" + pattern_letter(kinds[i]) + ".csv"),
                      ctx.provenance(ate, kinds[i]));
    if (f.json) {
        json j{{"provenance", ctx.provenance_json()}, {"ate", ate}, {"panels", json::array()}};
        for (const auto& v : vs)
            j["panels"].push_back(to_json(v));
        write_text(out / (stem + "_quartet.json"), j.dump(2) + "\n");
    }
}

struct ObservableFlags {
    std::string quartet = "latent";
    std::string control = "linear";
    std::optional<double> level;
    std::optional<double> slope;
    std::string y0_file;
    double noise_sd = 0.0;
};

ControlModel control_model(const ObservableFlags& f, const EffectVector& reference, std::uint64_t seed)
{
    ControlModel cm;
    if (f.control == "linear") {
        cm = default_control(reference);
        if (f.level)
            cm.level = *f.level;
        if (f.slope)
            cm.slope = *f.slope;
    } else if (f.control == "constant") {
        cm = ControlModel::constant(f.level.value_or(0.0));
    } else {
        if (f.y0_file.empty())
            throw std::invalid_argument("--control table needs --y0-file");
        cm = ControlModel::from_table(read_x_file(f.y0_file));
    }
    cm.noise_sd = f.noise_sd;
    cm.seed = seed;
    return cm;
}

struct MorphFlags {
    std::string from = "a";
    std::string to = "h";
    std::string target_file;
    std::string preserve = "mean";
    std::size_t iterations = 200'000;
    double step_scale = 0.05;
    double t0 = 0.4;
    std::optional<double> decay;
    double tolerance = 1e-9;
};

struct PowerFlags {
    std::optional<double> effect;
    double alpha = 0.05;
    double power = 0.8;
    std::optional<double> p1;
    std::optional<double> p2;
    std::optional<std::size_t> n1;
    std::optional<std::size_t> n2;
    std::optional<double> interaction;
};

struct SimulateFlags {
    double p0 = 0.3;
    double harmed = 0.0;
    std::size_t reps = 10'000;
    double alpha = 0.05;
    unsigned workers = 1;
    std::string pattern;
    double noise_sd = 1.0;
    std::optional<double> se;
    std::size_t source_units = 100;
};

int run_latent(const Common& c, const ShapeFlags& sf, const RunContext& ctx)
{
    const Formats f = parse_formats(c.format);
    const auto x = grid_for(c, false);
    const auto vs = make_quartet(kLatentKinds, x, c.ate, sf, c.seed);
    emit_effect_quartet("latent", kLatentKinds, vs, c.ate, f, prepare_out(c.out), ctx,
                        "Latent effects, average " + format_double(c.ate));
    return kExitOk;
}

int run_interaction(const Common& c, const ShapeFlags& sf, const RunContext& ctx)
{
    const Formats f = parse_formats(c.format);
    const auto x = grid_for(c, true);
    const auto vs = make_quartet(kInteractionKinds, x, c.ate, sf, c.seed);
    emit_effect_quartet("interaction", kInteractionKinds, vs, c.ate, f, prepare_out(c.out), ctx,
                        "Effects varying with x, average " + format_double(c.ate));
    return kExitOk;
}

int run_observable(const Common& c, const ShapeFlags& sf, const ObservableFlags& of, const RunContext& ctx)
{
    const Formats f = parse_formats(c.format);
    const bool interaction = of.quartet == "interaction";
    const auto& kinds = interaction ? kInteractionKinds : kLatentKinds;
    const auto x = grid_for(c, interaction);
    const auto vs = make_quartet(kinds, x, c.ate, sf, c.seed);
    const ControlModel cm = control_model(of, vs[0], c.seed);
    std::array<ObservableSet, 4> os;
    for (std::size_t i = 0; i < 4; ++i)
        os[i] = synthesize(vs[i], cm);

    const fs::path out = prepare_out(c.out);
    const std::string stem = "observable_" + of.quartet;
    if (f.svg)
        write_text(out / (stem + ".svg"),
                   render_quartet(layout_of(kinds, os, c.ate,
                                            "Observable outcomes: crosses treated, circles control", ctx)));
    if (f.csv)
        for (std::size_t i = 0; i < 4; ++i)
            write_csv(os[i], out / ("observable_" + std::string(1, pattern_letter(kinds[i])) + ".csv"),
                      ctx.provenance(c.ate, kinds[i]));
    if (f.json) {
        json j{{"provenance", ctx.provenance_json()}, {"ate", c.ate}, {"panels", json::array()}};
        for (const auto& o : os)
            j["panels"].push_back(to_json(o));
        write_text(out / (stem + ".json"), j.dump(2) + "\n");
    }
    return kExitOk;
}

int run_morph(const Common& c, const ShapeFlags& sf, const MorphFlags& mf, const RunContext& ctx)
{
    const Formats f = parse_formats(c.format);
    const auto x = grid_for(c, true);
    const EffectVector source = generate(sf.spec(parse_pattern(mf.from), c.seed), x, c.ate);

    EffectVector target_effects;
    if (!mf.target_file.empty())
        target_effects = read_effects_csv(mf.target_file);
    else
        target_effects = generate(sf.spec(parse_pattern(mf.to), c.seed), x, c.ate);
    const ShapeTarget target = ShapeTarget::from_effects(target_effects);

    MorphConfig cfg;
    cfg.preserve_mean = false;
    cfg.preserve_sd = false;
    {
        std::stringstream ss(mf.preserve);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item == "mean")
                cfg.preserve_mean = true;
            else if (item == "sd")
                cfg.preserve_sd = true;
            else if (item != "none")
                throw std::invalid_argument("--preserve takes mean, sd, or none");
        }
    }
    cfg.iterations = mf.iterations;
    cfg.step_scale = mf.step_scale;
    cfg.initial_temperature = mf.t0;
    cfg.decay = mf.decay;
    cfg.stat_tolerance = mf.tolerance;
    cfg.seed = c.seed;

    // Snapshots of the chain after one and two thirds of the budget.
    std::array<std::optional<std::vector<double>>, 2> snaps;
    const MorphResult r = morph(source, target, cfg, [&](const MorphStep& step) {
        for (std::size_t k = 0; k < 2; ++k)
            if (!snaps[k] && step.iteration >= cfg.iterations * (k + 1) / 3)
                snaps[k] = std::vector<double>(step.tau.begin(), step.tau.end());
    });

    const fs::path out = prepare_out(c.out);
    if (f.svg) {
        auto stage = [&](const std::optional<std::vector<double>>& tau) {
            EffectVector v = tau ? source : r.best;
            if (tau)
                for (std::size_t i = 0; i < v.size(); ++i)
                    v.units[i].tau = (*tau)[i];
            return v;
        };
        QuartetLayout q;
        q.panels[0] = Panel{"a", "source", source};
        q.panels[1] = Panel{"b", "one third", stage(snaps[0])};
        q.panels[2] = Panel{"c", "two thirds", stage(snaps[1])};
        q.panels[3] = Panel{"d", "final", r.best};
        q.ate = source.ate;
        q.title = "Morph toward " + (mf.target_file.empty() ? caption(parse_pattern(mf.to)) : mf.target_file);
        q.description = ctx.description();
        write_text(out / "morph.svg", render_quartet(q));
    }
    if (f.csv)
        write_csv(r.best, out / "morph.csv", ctx.provenance(r.best.ate));
    if (f.json) {
        json j{{"provenance", ctx.provenance_json()}, {"morph", to_json(r)}};
        write_text(out / "morph.json", j.dump(2) + "\n");
    }
    if (r.status == MorphStatus::no_progress)
        throw std::runtime_error("morph made no progress (distance reduced by less than 1%); "
                                 "best-so-far written");
    return kExitOk;
}

int run_power(const Common& c, const PowerFlags& pf, bool n_given, const RunContext& ctx, std::ostream& out)
{
    const double effect = pf.effect.value_or(c.ate);
    const std::size_t n = required_n_total(effect, pf.alpha, pf.power);
    const double n_cont = required_n_continuous(effect, pf.alpha, pf.power);
    const std::size_t half = n / 2;
    const double se = se_diff_proportions(half, half, Proportion::worst_case(), Proportion::worst_case());

    json j{{"provenance", ctx.provenance_json()},
           {"effect", effect},
           {"alpha", pf.alpha},
           {"target_power", pf.power},
           {"n_total", n},
           {"n_continuous", n_cont},
           {"worst_case_se", se},
           {"power_at_n", power_normal(effect, se, pf.alpha)}};

    std::ostringstream text;
    text << "n = " << n << '\n'
         << "continuous n = " << format_double(n_cont) << '\n'
         << "worst-case se at n = " << format_double(se) << '\n'
         << "power at n = " << format_double(power_normal(effect, se, pf.alpha)) << '\n';

    if (n_given) {
        const std::size_t a = pf.n1.value_or(c.n / 2);
        const std::size_t b = pf.n2.value_or(c.n - c.n / 2);
        const Proportion p1 = pf.p1 ? Proportion::of(*pf.p1) : Proportion::worst_case();
        const Proportion p2 = pf.p2 ? Proportion::of(*pf.p2) : Proportion::worst_case();
        const double se_n = se_diff_proportions(a, b, p1, p2);
        const double pw = power_normal(effect, se_n, pf.alpha);
        j["given_n"] = {{"n1", a}, {"n2", b}, {"se", se_n}, {"power", pw}};
        text << "se at n1 = " << a << ", n2 = " << b << ": " << format_double(se_n) << '\n'
             << "power at n1, n2 = " << format_double(pw) << '\n';
    }
    if (pf.interaction) {
        const double factor = interaction_n_factor(*pf.interaction);
        j["interaction_n_factor"] = factor;
        text << "interaction n factor = " << format_double(factor) << '\n';
    }

    const Formats f = parse_formats(c.format);
    if (f.json)
        out << j.dump(2) << '\n';
    else
        out << text.str();
    if (!c.out.empty() && f.json)
        write_text(prepare_out(c.out) / "power.json", j.dump(2) + "\n");
    return kExitOk;
}

int run_simulate(const Common& c, const ShapeFlags& sf, const SimulateFlags& mf, bool n_given,
                 const RunContext& ctx, std::ostream& out)
{
    const std::size_t n_total = n_given ? c.n : 126;
    Scenario s;
    json scenario;
    if (mf.pattern.empty()) {
        s = Scenario::binary(decompose_binary(mf.p0, c.ate, mf.harmed), n_total, mf.reps, c.seed, mf.alpha);
        const auto& d = s.decomposition;
        scenario = {{"kind", "binary"},
                    {"always_survive", d.always_survive},
                    {"never_survive", d.never_survive},
                    {"saved", d.saved},
                    {"harmed", d.harmed}};
    } else {
        const PatternKind kind = parse_pattern(mf.pattern);
        const auto x = !c.x_file.empty() ? read_x_file(c.x_file)
                       : is_latent(kind) ? index_grid(mf.source_units)
                                         : even_grid(mf.source_units, 0.0, 1.0);
        const double noise = mf.se ? noise_for_standard_error(*mf.se, n_total) : mf.noise_sd;
        s = Scenario::continuous(generate(sf.spec(kind, c.seed), x, c.ate), noise, n_total, mf.reps, c.seed,
                                 mf.alpha);
        scenario = {{"kind", "continuous"}, {"pattern", std::string(1, pattern_letter(kind))}, {"noise_sd", noise}};
    }
    scenario["n_total"] = n_total;
    scenario["alpha"] = mf.alpha;
    scenario["reps"] = mf.reps;

    const SimSummary summary = summarize(s, mf.workers);
    json j{{"provenance", ctx.provenance_json()}, {"scenario", scenario}, {"summary", to_json(summary)}};
    const std::string doc = j.dump(2) + "\n";
    out << doc;
    if (!c.out.empty())
        write_text(prepare_out(c.out) / "simulate.json", doc);
    return kExitOk;
}

// Appends "--key value" for every config entry whose flag is not already on
// the command line.
std::vector<std::string> merge_config(std::vector<std::string> args)
{
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            path = args[i].substr(9);
    }
    if (path.empty())
        return args;

    json cfg;
    try {
        cfg = json::parse(read_text(path));
    } catch (const json::exception& e) {
        throw CLI::ValidationError("--config", path + ": " + e.what());
    } catch (const std::runtime_error& e) {
        throw CLI::ValidationError("--config", e.what());
    }
    if (!cfg.is_object())
        throw CLI::ValidationError("--config", path + ": expected a JSON object");

    auto present = [&](const std::string& flag) {
        return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
            return a == flag || a.rfind(flag + "=", 0) == 0;
        });
    };
    auto scalar = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };

    for (const auto& [key, value] : cfg.items()) {
        const std::string flag = "--" + key;
        if (key == "config" || present(flag))
            continue;
        if (value.is_boolean()) {
            if (value.get<bool>())
                args.push_back(flag);
        } else if (value.is_array()) {
            std::string joined;
            for (const auto& item : value)
                joined += (joined.empty() ? "" : ",") + scalar(item);
            args.push_back(flag);
            args.push_back(joined);
        } else if (!value.is_null()) {
            args.push_back(flag);
            args.push_back(scalar(value));
        }
    }
    return args;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Causal quartets: effect patterns sharing one average, observable data, "
                 "morphing, and design arithmetic",
                 "cquartet"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    Common latent_c, inter_c, obs_c, morph_c, power_c, sim_c;
    ShapeFlags latent_s, inter_s, obs_s, morph_s, sim_s;
    ObservableFlags obs_f;
    MorphFlags morph_f;
    PowerFlags power_f;
    SimulateFlags sim_f;

    auto* latent = app.add_subcommand("latent", "Patterns a-d over units 1..n");
    add_common(latent, latent_c);
    add_latent_flags(latent, latent_s);

    auto* inter = app.add_subcommand("interaction", "Patterns e-h over an x grid on [0, 1] or --x-file");
    add_common(inter, inter_c);
    add_interaction_flags(inter, inter_s);

    auto* obs = app.add_subcommand("observable", "Control and treated outcomes consistent with a quartet");
    add_common(obs, obs_c);
    add_latent_flags(obs, obs_s);
    add_interaction_flags(obs, obs_s);
    obs->add_option("--quartet", obs_f.quartet, "Which quartet: latent or interaction")
        ->check(CLI::IsMember({"latent", "interaction"}));
    obs->add_option("--control", obs_f.control, "Control model: linear, constant, or table")
        ->check(CLI::IsMember({"linear", "constant", "table"}));
    obs->add_option("--level", obs_f.level, "Control level (intercept for linear)");
    obs->add_option("--control-slope", obs_f.slope, "Control slope in x (linear)");
    obs->add_option("--y0-file", obs_f.y0_file, "Explicit control outcomes, one per unit (table)")
        ->check(CLI::ExistingFile);
    obs->add_option("--noise-sd", obs_f.noise_sd, "Noise sd added to control outcomes and carried to treated")
        ->check(CLI::NonNegativeNumber);

    auto* mor = app.add_subcommand("morph", "Anneal one pattern toward another while keeping its mean/sd");
    morph_c.n = 100;
    morph_c.format = "csv,json";
    add_common(mor, morph_c);
    add_latent_flags(mor, morph_s);
    add_interaction_flags(mor, morph_s);
    mor->add_option("--from", morph_f.from, "Source pattern (a-h)");
    mor->add_option("--to", morph_f.to, "Target pattern (a-h)");
    mor->add_option("--target-file", morph_f.target_file, "Target table as a unit,x,tau CSV")
        ->check(CLI::ExistingFile);
    mor->add_option("--preserve", morph_f.preserve, "Statistics to keep: mean, sd, mean,sd, or none");
    mor->add_option("--iterations", morph_f.iterations, "Annealing iterations")->check(CLI::PositiveNumber);
    mor->add_option("--step-scale", morph_f.step_scale, "Proposal sd as a fraction of the tau range");
    mor->add_option("--t0", morph_f.t0, "Initial temperature");
    mor->add_option("--decay", morph_f.decay, "Geometric temperature decay per iteration, in (0, 1); default cools by e^-10 over the budget");
    mor->add_option("--tolerance", morph_f.tolerance, "Allowed drift of preserved statistics");

    auto* pow = app.add_subcommand("power", "Sample size and power for a difference in proportions");
    power_c.n = 0;
    power_c.out = "";
    power_c.format = "csv";
    add_common(pow, power_c);
    pow->add_option("--effect", power_f.effect, "Effect to detect (defaults to --ate)");
    pow->add_option("--alpha", power_f.alpha, "Two-sided significance level");
    pow->add_option("--power", power_f.power, "Target power");
    pow->add_option("--p1", power_f.p1, "Control proportion for the SE at --n (default worst case 0.5)");
    pow->add_option("--p2", power_f.p2, "Treated proportion for the SE at --n (default worst case 0.5)");
    pow->add_option("--n1", power_f.n1, "Control arm size (default n/2)");
    pow->add_option("--n2", power_f.n2, "Treated arm size (default n - n/2)");
    pow->add_option("--interaction", power_f.interaction,
                    "Interaction size relative to the main effect; reports the sample-size factor");

    auto* sim = app.add_subcommand("simulate", "Monte Carlo trials: power, estimates, exaggeration");
    sim_c.n = 126;
    sim_c.ate = 0.25;
    sim_c.out = "";
    sim_c.format = "json";
    add_common(sim, sim_c);
    add_latent_flags(sim, sim_s);
    add_interaction_flags(sim, sim_s);
    sim->add_option("--p0", sim_f.p0, "Control survival probability (binary scenario)");
    sim->add_option("--harmed", sim_f.harmed, "Share harmed by treatment (binary scenario)");
    sim->add_option("--reps", sim_f.reps, "Replications")->check(CLI::PositiveNumber);
    sim->add_option("--alpha", sim_f.alpha, "Two-sided significance level");
    sim->add_option("--workers", sim_f.workers, "Worker threads")->check(CLI::PositiveNumber);
    sim->add_option("--pattern", sim_f.pattern, "Continuous scenario: effect pattern a-h");
    sim->add_option("--noise-sd", sim_f.noise_sd, "Continuous scenario: outcome noise sd");
    sim->add_option("--se", sim_f.se, "Continuous scenario: set noise so the estimate has this SE");
    sim->add_option("--source-units", sim_f.source_units, "Continuous scenario: size of the source pattern");

    std::vector<std::string> args;
    try {
        args = merge_config(raw_args);
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        const CLI::App* failed = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        err << failed->help();
        return kExitUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    RunContext ctx;
    ctx.command = sub->get_name();
    ctx.flags = flatten_config(sub);

    try {
        if (sub == latent) {
            ctx.seed = latent_c.seed;
            return run_latent(latent_c, latent_s, ctx);
        }
        if (sub == inter) {
            ctx.seed = inter_c.seed;
            return run_interaction(inter_c, inter_s, ctx);
        }
        if (sub == obs) {
            ctx.seed = obs_c.seed;
            return run_observable(obs_c, obs_s, obs_f, ctx);
        }
        if (sub == mor) {
            ctx.seed = morph_c.seed;
            return run_morph(morph_c, morph_s, morph_f, ctx);
        }
        if (sub == pow) {
            ctx.seed = power_c.seed;
            return run_power(power_c, power_f, pow->count("--n") > 0, ctx, out);
        }
        ctx.seed = sim_c.seed;
        return run_simulate(sim_c, sim_s, sim_f, sim->count("--n") > 0, ctx, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace cquartet::cli
