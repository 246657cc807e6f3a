#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>

#include "kerrlab/cli.hpp"
#include "kerrlab/error.hpp"
#include "kerrlab/io.hpp"
#include "schema.hpp"

namespace kerrlab::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Field number(std::string key, double def, double min = -kInf, double max = kInf, bool min_exclusive = false) {
    Field f{std::move(key), Kind::number, def};
    f.min = min;
    f.max = max;
    f.min_exclusive = min_exclusive;
    return f;
}

Field integer(std::string key, std::int64_t def, double min = -kInf, double max = kInf) {
    Field f{std::move(key), Kind::integer, def};
    f.min = min;
    f.max = max;
    return f;
}

Field choice(std::string key, std::string def, std::vector<std::string> choices) {
    Field f{std::move(key), Kind::choice, std::move(def)};
    f.choices = std::move(choices);
    return f;
}

Field object(std::string key, std::vector<Field> children) {
    Field f{std::move(key), Kind::object, json::object()};
    f.children = std::move(children);
    return f;
}

Field boolean(std::string key, bool def) { return Field{std::move(key), Kind::boolean, def}; }
Field complex(std::string key, double def) { return Field{std::move(key), Kind::complex, def}; }

std::vector<Field> kerr_fields(double chi, double T) {
    return {number("chi", chi), number("chi_s", 0.0), number("omega_s", 0.0), number("T", T, 0.0)};
}

std::vector<Field> interferometer_fields(bool eraser) {
    std::vector<Field> f = {
        complex("nu", 1.0),
        object("kerr", kerr_fields(std::numbers::pi / 4, 1.0)),
        number("theta_offset", 0.0),
        integer("theta_points", 64, 3, 1e6),
        integer("probe_cutoff", 0, 0, 400),
    };
    if (eraser) {
        f.push_back(object("second_kerr", kerr_fields(std::numbers::pi / 4, 1.0)));
        f.push_back(number("jitter_sigma", 0.0, 0.0));
        f.push_back(choice("jitter_mode", "gaussian", {"gaussian", "uniform"}));
        f.push_back(integer("jitter_trials", 1, 1, 1e8));
    }
    return f;
}

std::vector<Field> cat_fields() {
    return {
        complex("nu", 1.5),
        object("kerr", kerr_fields(std::numbers::pi / 2, 1.0)),
        choice("outcome", "135", {"45", "135"}),
        integer("probe_cutoff", 0, 0, 400),
        number("wigner_half_width", 0.0, 0.0),
        integer("wigner_points", 121, 3, 4001),
    };
}

std::vector<Field> ghz_fields() {
    return {choice("bell", "phi+", {"phi+", "phi-", "psi+", "psi-"}), number("phi", std::numbers::pi)};
}

std::vector<Field> eve_fields() {
    Field alphabet{"alphabet", Kind::alphabet, json::array({"H", "V", "45", "135"})};
    return {number("phi", std::numbers::pi / 2), number("transmittance", 0.5, 0.0, 1.0), std::move(alphabet)};
}

std::vector<Field> tomo_fields() {
    return {
        choice("state", "odd_cat", {"odd_cat", "even_cat", "coherent", "vacuum"}),
        Field{"dataset", Kind::string, ""},
        complex("nu", 1.5),
        integer("phases", 12, 1, 10000),
        integer("samples_per_phase", 10000, 1, 1e8),
        object("noise", {choice("kind", "additive_gaussian", {"none", "additive_gaussian", "efficiency"}),
                         number("sigma_fraction", 0.25, 0.0), number("eta", 1.0, 0.0, 1.0, true)}),
        object("reconstruction",
               {integer("cutoff", 16, 1, 200), integer("max_iterations", 5000, 1, 1e7),
                number("convergence_tol", 1e-6, 0.0, kInf, true), integer("bin_count", 128, 2, 100000),
                boolean("noise_aware", false)}),
        integer("bootstrap_resamples", 100, 50, 100000),
        number("wigner_half_width", 3.0, 0.0, kInf, true),
        integer("wigner_points", 41, 3, 4001),
    };
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
    return out;
}

std::string child_path(const std::string& parent, const std::string& key) {
    return parent.empty() ? key : parent + "." + key;
}

std::string describe_range(const Field& f) {
    std::string out;
    if (f.min > -kInf) out += (f.min_exclusive ? "> " : ">= ") + io::format_double(f.min);
    if (f.max < kInf) out += std::string(out.empty() ? "" : " and ") + "<= " + io::format_double(f.max);
    return out;
}

void check_value(const json& value, const Field& field, const std::string& path, std::vector<Diagnostic>& out);

void check_object(const json& value, const std::vector<Field>& fields, const std::string& path,
                  std::vector<Diagnostic>& out) {
    if (!value.is_object()) {
        out.push_back({path, "must be an object"});
        return;
    }
    std::vector<std::string> allowed;
    for (const auto& f : fields) allowed.push_back(f.key);
    for (const auto& [key, v] : value.items()) {
        const auto it = std::find_if(fields.begin(), fields.end(), [&](const Field& f) { return f.key == key; });
        if (it == fields.end()) {
            out.push_back({child_path(path, key), "unknown key; allowed keys: " + join(allowed)});
        } else {
            check_value(v, *it, child_path(path, key), out);
        }
    }
}

void check_range(double x, const Field& field, const std::string& path, std::vector<Diagnostic>& out) {
    const bool below = field.min_exclusive ? !(x > field.min) : !(x >= field.min);
    if (below || !(x <= field.max)) out.push_back({path, "must be " + describe_range(field)});
}

void check_value(const json& value, const Field& field, const std::string& path, std::vector<Diagnostic>& out) {
    switch (field.kind) {
        case Kind::number:
            if (!value.is_number() || !std::isfinite(value.get<double>())) {
                out.push_back({path, "must be a finite number"});
            } else {
                check_range(value.get<double>(), field, path, out);
            }
            break;
        case Kind::integer:
            if (!value.is_number_integer()) {
                out.push_back({path, "must be an integer"});
            } else {
                check_range(value.get<double>(), field, path, out);
            }
            break;
        case Kind::boolean:
            if (!value.is_boolean()) out.push_back({path, "must be true or false"});
            break;
        case Kind::string:
            if (!value.is_string()) out.push_back({path, "must be a string"});
            break;
        case Kind::choice:
            if (!value.is_string() ||
                std::find(field.choices.begin(), field.choices.end(), value.get<std::string>()) == field.choices.end()) {
                out.push_back({path, "must be one of: " + join(field.choices)});
            }
            break;
        case Kind::complex: {
            const bool ok = (value.is_number() && std::isfinite(value.get<double>())) ||
                            (value.is_array() && value.size() == 2 && value[0].is_number() && value[1].is_number() &&
                             std::isfinite(value[0].get<double>()) && std::isfinite(value[1].get<double>()));
            if (!ok) out.push_back({path, "must be a number or a [re, im] pair"});
            break;
        }
        case Kind::object:
            check_object(value, field.children, path, out);
            break;
        case Kind::alphabet:
            if (!value.is_array() || value.empty()) {
                out.push_back({path, "must be a nonempty array"});
                break;
            }
            for (std::size_t i = 0; i < value.size(); ++i) {
                const auto& e = value[i];
                const bool named = e.is_string() && (e == "H" || e == "V" || e == "45" || e == "135");
                const bool angle = e.is_number() && std::isfinite(e.get<double>());
                if (!named && !angle) {
                    out.push_back({path + "[" + std::to_string(i) + "]",
                                   "must be one of H, V, 45, 135 or a polarization angle in radians"});
                }
            }
            break;
        case Kind::emit:
            if (!value.is_array()) {
                out.push_back({path, "must be an array drawn from: csv, json"});
                break;
            }
            for (std::size_t i = 0; i < value.size(); ++i) {
                if (!(value[i] == "csv" || value[i] == "json")) {
                    out.push_back({path + "[" + std::to_string(i) + "]", "must be one of: csv, json"});
                }
            }
            break;
    }
}

json resolve_object(const json& value, const std::vector<Field>& fields) {
    json out = value.is_object() ? value : json::object();
    for (const auto& f : fields) {
        if (f.kind == Kind::object) {
            out[f.key] = resolve_object(out.contains(f.key) ? out[f.key] : json::object(), f.children);
        } else if (!out.contains(f.key)) {
            out[f.key] = f.default_value;
        }
    }
    return out;
}

}  // namespace

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names = {"interfere", "erase", "cat", "ghz", "eve", "tomo"};
    return names;
}

std::vector<Field> scenario_fields(const std::string& scenario) {
    if (scenario == "interfere") return interferometer_fields(false);
    if (scenario == "erase") return interferometer_fields(true);
    if (scenario == "cat") return cat_fields();
    if (scenario == "ghz") return ghz_fields();
    if (scenario == "eve") return eve_fields();
    if (scenario == "tomo") return tomo_fields();
    throw Error(ErrorKind::config_invalid, "unknown scenario '" + scenario + "'");
}

std::vector<Field> top_level_fields() {
    return {
        choice("scenario", "", scenario_names()),
        integer("seed", 0, 0),
        Field{"output_dir", Kind::string, "out"},
        Field{"emit", Kind::emit, json::array({"csv", "json"})},
        Field{"parameters", Kind::object, json::object()},
    };
}

json parse_config_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, column = 1;
        const std::size_t limit = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        for (std::size_t i = 0; i < limit; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw Error(ErrorKind::parse_error,
                    "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + e.what());
    }
}

std::vector<Diagnostic> validate(const json& config) {
    std::vector<Diagnostic> out;
    if (!config.is_object()) {
        out.push_back({"", "config must be a JSON object"});
        return out;
    }
    auto fields = top_level_fields();
    const bool has_scenario = config.contains("scenario");
    const bool known = has_scenario && config["scenario"].is_string() &&
                       std::find(scenario_names().begin(), scenario_names().end(),
                                 config["scenario"].get<std::string>()) != scenario_names().end();
    if (!has_scenario) {
        out.push_back({"scenario", "is required; allowed values: " + join(scenario_names())});
    } else if (!known) {
        out.push_back({"scenario", "unknown scenario " + config["scenario"].dump() +
                                       "; allowed values: " + join(scenario_names())});
    }
    for (auto& f : fields) {
        if (f.key == "parameters") f.children = known ? scenario_fields(config["scenario"].get<std::string>()) : std::vector<Field>{};
    }
    for (const auto& [key, v] : config.items()) {
        const auto it = std::find_if(fields.begin(), fields.end(), [&](const Field& f) { return f.key == key; });
        if (it == fields.end()) {
            std::vector<std::string> allowed;
            for (const auto& f : fields) allowed.push_back(f.key);
            out.push_back({key, "unknown key; allowed keys: " + join(allowed)});
        } else if (key == "scenario") {
            continue;
        } else if (key == "parameters" && !known) {
            if (!v.is_object()) out.push_back({key, "must be an object"});
        } else {
            check_value(v, *it, key, out);
        }
    }
    return out;
}

std::vector<Diagnostic> validate_file(const std::filesystem::path& path) {
    try {
        return validate(parse_config_text(io::read_file(path)));
    } catch (const Error& e) {
        return {{"", e.what()}};
    }
}

json resolve_defaults(const json& config) {
    const auto scenario = config.at("scenario").get<std::string>();
    auto fields = top_level_fields();
    for (auto& f : fields) {
        if (f.key == "parameters") f.children = scenario_fields(scenario);
    }
    return resolve_object(config, fields);
}

std::string config_hash(const json& resolved) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : resolved.dump()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string("fnv1a64:") + buf;
}

}  // namespace kerrlab::cli
