#include "dweb/config.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "dweb/errors.hpp"
#include "dweb/text.hpp"

namespace dweb {

namespace {

struct KeyValue {
    std::string key;
    std::string value;
    std::size_t line;
};

std::vector<KeyValue> split_pairs(std::string_view text) {
    std::vector<KeyValue> out;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        std::string_view line =
            text.substr(start, end == std::string_view::npos ? std::string_view::npos
                                                             : end - start);
        start = (end == std::string_view::npos) ? text.size() + 1 : end + 1;
        ++line_no;

        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ValidationError("config line " + fmt_uint(line_no) +
                                  ": expected KEY = value, got '" + std::string(line) + "'");
        }
        out.push_back({std::string(trim(line.substr(0, eq))),
                       std::string(trim(line.substr(eq + 1))), line_no});
    }
    return out;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t at = text.find(sep, start);
        if (at == std::string_view::npos) {
            parts.push_back(trim(text.substr(start)));
            break;
        }
        parts.push_back(trim(text.substr(start, at - start)));
        start = at + 1;
    }
    return parts;
}

double real_value(const KeyValue& kv) {
    auto v = parse_real(kv.value);
    if (!v) {
        throw ValidationError("config key " + kv.key + ": expected a number, got '" +
                              kv.value + "'");
    }
    return *v;
}

long long int_value(const KeyValue& kv) {
    auto v = parse_int(kv.value);
    if (!v) {
        throw ValidationError("config key " + kv.key + ": expected an integer, got '" +
                              kv.value + "'");
    }
    return *v;
}

std::vector<int> int_list(const KeyValue& kv) {
    std::vector<int> out;
    for (auto part : split(kv.value, ',')) {
        auto v = parse_int(part);
        if (!v) {
            throw ValidationError("config key " + kv.key + ": expected integers, got '" +
                                  std::string(part) + "'");
        }
        out.push_back(static_cast<int>(*v));
    }
    return out;
}

std::vector<double> real_list(const KeyValue& kv) {
    std::vector<double> out;
    for (auto part : split(kv.value, ',')) {
        auto v = parse_real(part);
        if (!v) {
            throw ValidationError("config key " + kv.key + ": expected numbers, got '" +
                                  std::string(part) + "'");
        }
        out.push_back(*v);
    }
    return out;
}

std::vector<std::vector<int>> int_matrix(const KeyValue& kv) {
    std::vector<std::vector<int>> out;
    for (auto row : split(kv.value, ';')) {
        KeyValue row_kv{kv.key, std::string(row), kv.line};
        out.push_back(int_list(row_kv));
    }
    return out;
}

const std::unordered_set<std::string> kHighKeys = {
    "AVG_NB_FT",     "AVG_NB_DIM", "AVG_TOT_NB_DIM",   "AVG_NB_MEAS",  "AVG_DENSITY",
    "AVG_NB_LEVELS", "AVG_NB_ATT", "AVG_HHLEVEL_SIZE", "DB.AVG_NB_ATT"};

const std::unordered_set<std::string> kLowKeys = {
    "NB_FT",  "TOT_NB_DIM",   "NB_DIM",         "NB_MEAS", "DENSITY",
    "NB_ATT", "HHLEVEL_SIZE", "DIM_ASSIGNMENT", "NB_LEVELS"};

const std::unordered_set<std::string> kWorkloadKeys = {
    "NB_Q",      "WL.AVG_NB_ATT", "AVG_NB_RESTR", "PROB_OLAP",
    "PROB_CUBE", "PROB_HAVING",   "AVG_NB_AGGREG", "AVG_NB_DD"};

const std::unordered_set<std::string> kArtifactKeys = {
    "SEED",        "SPREAD",      "REFERENTIAL_SIZE",    "MEASURE_MIN",
    "MEASURE_MAX", "MAX_ROWS",    "STREAMING_THRESHOLD"};

const std::unordered_set<std::string> kInformationalKeys = {"TOOL_VERSION",
                                                            "WAREHOUSE_MEGABYTES"};

// Broadcast convenience: a single scalar expands across `n` slots.
template <typename T>
std::vector<T> broadcast(std::vector<T> values, std::size_t n, const std::string& key) {
    if (values.size() == n) return values;
    if (values.size() == 1) return std::vector<T>(n, values.front());
    throw ValidationError("config key " + key + ": expected 1 or " + fmt_uint(n) +
                          " entries, got " + fmt_uint(values.size()));
}

}  // namespace

void load_config_text(std::string_view text, RunConfig& config) {
    std::vector<KeyValue> pairs = split_pairs(text);

    bool has_high = false;
    bool has_low = false;
    for (const auto& kv : pairs) {
        if (kHighKeys.contains(kv.key)) has_high = true;
        if (kLowKeys.contains(kv.key)) has_low = true;
        bool known = kHighKeys.contains(kv.key) || kLowKeys.contains(kv.key) ||
                     kWorkloadKeys.contains(kv.key) || kArtifactKeys.contains(kv.key) ||
                     kInformationalKeys.contains(kv.key) || kv.key == "DIM_SFACTOR" ||
                     kv.key.starts_with("CHECKSUM ");
        if (!known) {
            if (kv.key == "PROB_EXTRACT" || kv.key == "PROB_ROLLUP") {
                throw ValidationError("config key " + kv.key +
                                      " is derived (1 - PROB_OLAP / 1 - PROB_CUBE) and cannot "
                                      "be set directly");
            }
            throw ValidationError("config line " + fmt_uint(kv.line) + ": unknown key '" +
                                  kv.key + "'");
        }
    }
    if (has_high && has_low) {
        throw ValidationError(
            "config mixes high-level (AVG_*) and low-level (NB_FT, ...) parameters; exactly "
            "one family may be active");
    }

    if (has_high) {
        if (!config.high) config.high = HighLevelParams{};
        config.low.reset();
    } else if (has_low) {
        if (!config.low) config.low = LowLevelParams{};
        config.high.reset();
    }

    // First pass: counts, so lists can be broadcast.
    if (config.low) {
        for (const auto& kv : pairs) {
            if (kv.key == "NB_FT") config.low->nb_ft = static_cast<int>(int_value(kv));
            if (kv.key == "TOT_NB_DIM") config.low->tot_nb_dim = static_cast<int>(int_value(kv));
        }
        if (config.low->nb_ft < 1 || config.low->tot_nb_dim < 1) {
            throw ValidationError(
                "low-level config requires NB_FT >= 1 and TOT_NB_DIM >= 1 anchors");
        }
    }

    for (const auto& kv : pairs) {
        const std::string& key = kv.key;
        if (key == "NB_FT" || key == "TOT_NB_DIM" || kInformationalKeys.contains(key) ||
            key.starts_with("CHECKSUM ")) {
            continue;
        }
        if (key == "SEED") {
            auto v = parse_u64(kv.value);
            if (!v) {
                throw ValidationError("config key SEED: expected a decimal or 0x hex integer, "
                                      "got '" + kv.value + "'");
            }
            config.seed = *v;
        } else if (key == "SPREAD") {
            config.spread = real_value(kv);
            if (config.high) config.high->spread = config.spread;
        } else if (key == "REFERENTIAL_SIZE") {
            config.limits.referential_size = static_cast<std::size_t>(int_value(kv));
        } else if (key == "MEASURE_MIN") {
            config.limits.measure_lo = real_value(kv);
        } else if (key == "MEASURE_MAX") {
            config.limits.measure_hi = real_value(kv);
        } else if (key == "MAX_ROWS") {
            config.limits.max_rows = int_value(kv);
        } else if (key == "STREAMING_THRESHOLD") {
            config.limits.streaming_threshold = int_value(kv);
        } else if (key == "NB_Q") {
            config.workload.nb_q = static_cast<int>(int_value(kv));
        } else if (key == "WL.AVG_NB_ATT") {
            config.workload.avg_nb_att = real_value(kv);
        } else if (key == "AVG_NB_RESTR") {
            config.workload.avg_nb_restr = real_value(kv);
        } else if (key == "PROB_OLAP") {
            config.workload.prob_olap = real_value(kv);
        } else if (key == "AVG_NB_AGGREG") {
            config.workload.avg_nb_aggreg = real_value(kv);
        } else if (key == "PROB_CUBE") {
            config.workload.prob_cube = real_value(kv);
        } else if (key == "PROB_HAVING") {
            config.workload.prob_having = real_value(kv);
        } else if (key == "AVG_NB_DD") {
            config.workload.avg_nb_dd = real_value(kv);
        } else if (config.high) {
            HighLevelParams& h = *config.high;
            if (key == "AVG_NB_FT") h.avg_nb_ft = real_value(kv);
            else if (key == "AVG_NB_DIM") h.avg_nb_dim = real_value(kv);
            else if (key == "AVG_TOT_NB_DIM") h.avg_tot_nb_dim = real_value(kv);
            else if (key == "AVG_NB_MEAS") h.avg_nb_meas = real_value(kv);
            else if (key == "AVG_DENSITY") h.avg_density = real_value(kv);
            else if (key == "AVG_NB_LEVELS") h.avg_nb_levels = real_value(kv);
            else if (key == "AVG_NB_ATT" || key == "DB.AVG_NB_ATT") h.avg_nb_att = real_value(kv);
            else if (key == "AVG_HHLEVEL_SIZE") h.avg_hhlevel_size = real_value(kv);
            else if (key == "DIM_SFACTOR") h.dim_sfactor = real_value(kv);
            else {
                throw ValidationError("config key " + key +
                                      " is a low-level key but the file is high-level");
            }
        } else if (config.low) {
            LowLevelParams& l = *config.low;
            auto ft_n = static_cast<std::size_t>(l.nb_ft);
            auto dim_n = static_cast<std::size_t> (l.tot_nb_dim);
            if (key == "NB_DIM") l.nb_dim = broadcast(int_list(kv), ft_n, key);
            else if (key == "NB_MEAS") l.nb_meas = broadcast(int_list(kv), ft_n, key);
            else if (key == "DENSITY") l.density = broadcast(real_list(kv), ft_n, key);
            else if (key == "NB_LEVELS") l.nb_levels = broadcast(int_list(kv), dim_n, key);
            else if (key == "HHLEVEL_SIZE") l.hhlevel_size = broadcast(int_list(kv), dim_n, key);
            else if (key == "DIM_SFACTOR") l.dim_sfactor = broadcast(real_list(kv), dim_n, key);
            else if (key == "NB_ATT") {
                auto m = int_matrix(kv);
                if (m.size() == 1 && dim_n != 1) m = std::vector(dim_n, m.front());
                l.nb_att = std::move(m);
            } else if (key == "DIM_ASSIGNMENT") {
                l.dim_assignment = int_matrix(kv);
            } else {
                throw ValidationError("config key " + key +
                                      " is a high-level key but the file is low-level");
            }
        }
    }

    // A low-level NB_ATT matrix may still need per-level broadcast: one value
    // per dimension expands across that dimension's levels.
    if (config.low) {
        LowLevelParams& l = *config.low;
        if (!l.nb_att.empty() && l.nb_levels.size() == l.nb_att.size()) {
            for (std::size_t d = 0; d < l.nb_att.size(); ++d) {
                auto levels = static_cast<std::size_t>(l.nb_levels[d]);
                if (l.nb_att[d].size() == 1 && levels != 1) {
                    l.nb_att[d] = std::vector<int>(levels, l.nb_att[d].front());
                }
            }
        }
    }
}

void load_config_file(const std::filesystem::path& path, RunConfig& config) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    load_config_text(buffer.str(), config);
}

std::string render_int_list(const std::vector<int>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ",";
        out += fmt_int(values[i]);
    }
    return out;
}

std::string render_real_list(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ",";
        out += fmt_real(values[i]);
    }
    return out;
}

std::string render_int_matrix(const std::vector<std::vector<int>>& rows) {
    std::string out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i) out += "; ";
        out += render_int_list(rows[i]);
    }
    return out;
}

std::string render_config_lines(const RunConfig& config, const LowLevelParams& resolved) {
    std::string out;
    auto line = [&](std::string_view key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    };
    line("SEED", fmt_uint(config.seed));
    line("SPREAD", fmt_real(config.spread));
    line("NB_FT", fmt_int(resolved.nb_ft));
    line("TOT_NB_DIM", fmt_int(resolved.tot_nb_dim));
    line("NB_DIM", render_int_list(resolved.nb_dim));
    line("NB_MEAS", render_int_list(resolved.nb_meas));
    line("DENSITY", render_real_list(resolved.density));
    line("DIM_ASSIGNMENT", render_int_matrix(resolved.dim_assignment));
    line("NB_LEVELS", render_int_list(resolved.nb_levels));
    line("NB_ATT", render_int_matrix(resolved.nb_att));
    line("HHLEVEL_SIZE", render_int_list(resolved.hhlevel_size));
    line("DIM_SFACTOR", render_real_list(resolved.dim_sfactor));
    line("NB_Q", fmt_int(config.workload.nb_q));
    line("WL.AVG_NB_ATT", fmt_real(config.workload.avg_nb_att));
    line("AVG_NB_RESTR", fmt_real(config.workload.avg_nb_restr));
    line("PROB_OLAP", fmt_real(config.workload.prob_olap));
    line("AVG_NB_AGGREG", fmt_real(config.workload.avg_nb_aggreg));
    line("PROB_CUBE", fmt_real(config.workload.prob_cube));
    line("PROB_HAVING", fmt_real(config.workload.prob_having));
    line("AVG_NB_DD", fmt_real(config.workload.avg_nb_dd));
    line("REFERENTIAL_SIZE", fmt_uint(config.limits.referential_size));
    line("MEASURE_MIN", fmt_real(config.limits.measure_lo));
    line("MEASURE_MAX", fmt_real(config.limits.measure_hi));
    line("MAX_ROWS", fmt_int(config.limits.max_rows));
    line("STREAMING_THRESHOLD", fmt_int(config.limits.streaming_threshold));
    return out;
}

}  // namespace dweb
