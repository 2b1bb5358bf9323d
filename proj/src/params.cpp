#include "dweb/params.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "dweb/errors.hpp"
#include "dweb/text.hpp"

namespace dweb {

namespace {

constexpr double kMinDensity = 1e-6;  // lower clamp for drawn densities, keeps (0,1]

void require(ValidationReport& report, bool ok, const std::string& field,
             const std::string& message) {
    if (!ok) report.violations.push_back({field, message});
}

}  // namespace

std::string ValidationReport::to_string() const {
    if (violations.empty()) return "ok";
    std::string out;
    for (const auto& v : violations) {
        out += v.field;
        out += ": ";
        out += v.message;
        out += '\n';
    }
    return out;
}

ValidationReport validate(const HighLevelParams& p) {
    ValidationReport r;
    require(r, p.avg_nb_ft >= 1.0, "AVG_NB_FT", "must be >= 1, got " + fmt_real(p.avg_nb_ft));
    require(r, p.avg_nb_dim >= 1.0, "AVG_NB_DIM", "must be >= 1, got " + fmt_real(p.avg_nb_dim));
    require(r, p.avg_tot_nb_dim >= 1.0, "AVG_TOT_NB_DIM",
            "must be >= 1, got " + fmt_real(p.avg_tot_nb_dim));
    require(r, p.avg_nb_meas >= 0.0, "AVG_NB_MEAS",
            "must be >= 0, got " + fmt_real(p.avg_nb_meas));
    require(r, p.avg_density > 0.0 && p.avg_density <= 1.0, "AVG_DENSITY",
            "must be in (0,1], got " + fmt_real(p.avg_density));
    require(r, p.avg_nb_levels >= 1.0, "AVG_NB_LEVELS",
            "must be >= 1, got " + fmt_real(p.avg_nb_levels));
    require(r, p.avg_nb_att >= 0.0, "AVG_NB_ATT", "must be >= 0, got " + fmt_real(p.avg_nb_att));
    require(r, p.avg_hhlevel_size >= 1.0, "AVG_HHLEVEL_SIZE",
            "must be >= 1, got " + fmt_real(p.avg_hhlevel_size));
    require(r, p.dim_sfactor >= 1.0, "DIM_SFACTOR",
            "must be >= 1, got " + fmt_real(p.dim_sfactor));
    require(r, p.spread >= 0.0, "SPREAD", "must be >= 0, got " + fmt_real(p.spread));
    return r;
}

ValidationReport validate(const LowLevelParams& p) {
    ValidationReport r;
    require(r, p.nb_ft >= 1, "NB_FT", "must be >= 1, got " + fmt_int(p.nb_ft));
    require(r, p.tot_nb_dim >= 1, "TOT_NB_DIM", "must be >= 1, got " + fmt_int(p.tot_nb_dim));
    auto ft_sized = [&](const char* name, std::size_t n) {
        require(r, n == static_cast<std::size_t>(p.nb_ft), name,
                "needs one entry per fact table (" + fmt_int(p.nb_ft) + "), got " +
                    fmt_uint(n));
    };
    auto dim_sized = [&](const char* name, std::size_t n) {
        require(r, n == static_cast<std::size_t>(p.tot_nb_dim), name,
                "needs one entry per dimension (" + fmt_int(p.tot_nb_dim) + "), got " +
                    fmt_uint(n));
    };
    ft_sized("NB_DIM", p.nb_dim.size());
    ft_sized("NB_MEAS", p.nb_meas.size());
    ft_sized("DENSITY", p.density.size());
    dim_sized("NB_LEVELS", p.nb_levels.size());
    dim_sized("NB_ATT", p.nb_att.size());
    dim_sized("HHLEVEL_SIZE", p.hhlevel_size.size());
    dim_sized("DIM_SFACTOR", p.dim_sfactor.size());

    for (std::size_t f = 0; f < p.nb_dim.size(); ++f) {
        const std::string tag = "(" + fmt_uint(f + 1) + ")";
        require(r, p.nb_dim[f] >= 1 && p.nb_dim[f] <= p.tot_nb_dim, "NB_DIM" + tag,
                "must be in [1, TOT_NB_DIM], got " + fmt_int(p.nb_dim[f]));
    }
    for (std::size_t f = 0; f < p.nb_meas.size(); ++f) {
        require(r, p.nb_meas[f] >= 0, "NB_MEAS(" + fmt_uint(f + 1) + ")",
                "must be >= 0, got " + fmt_int(p.nb_meas[f]));
    }
    for (std::size_t f = 0; f < p.density.size(); ++f) {
        require(r, p.density[f] > 0.0 && p.density[f] <= 1.0,
                "DENSITY(" + fmt_uint(f + 1) + ")",
                "must be in (0,1], got " + fmt_real(p.density[f]));
    }
    for (std::size_t d = 0; d < p.nb_levels.size(); ++d) {
        require(r, p.nb_levels[d] >= 1, "NB_LEVELS(" + fmt_uint(d + 1) + ")",
                "must be >= 1, got " + fmt_int(p.nb_levels[d]));
    }
    for (std::size_t d = 0; d < p.hhlevel_size.size(); ++d) {
        require(r, p.hhlevel_size[d] >= 1, "HHLEVEL_SIZE(" + fmt_uint(d + 1) + ")",
                "must be >= 1, got " + fmt_int(p.hhlevel_size[d]));
    }
    for (std::size_t d = 0; d < p.dim_sfactor.size(); ++d) {
        require(r, p.dim_sfactor[d] >= 1.0, "DIM_SFACTOR(" + fmt_uint(d + 1) + ")",
                "must be >= 1, got " + fmt_real(p.dim_sfactor[d]));
    }
    for (std::size_t d = 0; d < p.nb_att.size(); ++d) {
        if (d < p.nb_levels.size()) {
            require(r, p.nb_att[d].size() == static_cast<std::size_t>(p.nb_levels[d]),
                    "NB_ATT(" + fmt_uint(d + 1) + ")",
                    "needs one entry per level (" + fmt_int(p.nb_levels[d]) + "), got " +
                        fmt_uint(p.nb_att[d].size()));
        }
        for (std::size_t h = 0; h < p.nb_att[d].size(); ++h) {
            require(r, p.nb_att[d][h] >= 0,
                    "NB_ATT(" + fmt_uint(d + 1) + "," + fmt_uint(h + 1) + ")",
                    "must be >= 0, got " + fmt_int(p.nb_att[d][h]));
        }
    }
    if (!p.dim_assignment.empty()) {
        ft_sized("DIM_ASSIGNMENT", p.dim_assignment.size());
        for (std::size_t f = 0; f < p.dim_assignment.size(); ++f) {
            const auto& a = p.dim_assignment[f];
            const std::string tag = "DIM_ASSIGNMENT(" + fmt_uint(f + 1) + ")";
            if (f < p.nb_dim.size()) {
                require(r, a.size() == static_cast<std::size_t>(p.nb_dim[f]), tag,
                        "needs NB_DIM(" + fmt_uint(f + 1) + ") = " +
                            fmt_int(f < p.nb_dim.size() ? p.nb_dim[f] : 0) + " entries, got " +
                            fmt_uint(a.size()));
            }
            std::vector<int> sorted = a;
            std::sort(sorted.begin(), sorted.end());
            require(r, std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), tag,
                    "dimensions must be distinct");
            for (int idx : a) {
                require(r, idx >= 1 && idx <= p.tot_nb_dim, tag,
                        "dimension index " + fmt_int(idx) + " out of [1, TOT_NB_DIM]");
            }
        }
    }
    return r;
}

ValidationReport validate(const WorkloadParams& p) {
    ValidationReport r;
    require(r, p.nb_q >= 1, "NB_Q", "must be >= 1, got " + fmt_int(p.nb_q));
    require(r, p.avg_nb_att >= 1.0, "WL.AVG_NB_ATT",
            "must be >= 1, got " + fmt_real(p.avg_nb_att));
    require(r, p.avg_nb_restr >= 0.0, "AVG_NB_RESTR",
            "must be >= 0, got " + fmt_real(p.avg_nb_restr));
    require(r, p.prob_olap >= 0.0 && p.prob_olap <= 1.0, "PROB_OLAP",
            "must be in [0,1], got " + fmt_real(p.prob_olap));
    require(r, p.avg_nb_aggreg >= 1.0, "AVG_NB_AGGREG",
            "must be >= 1, got " + fmt_real(p.avg_nb_aggreg));
    require(r, p.prob_cube >= 0.0 && p.prob_cube <= 1.0, "PROB_CUBE",
            "must be in [0,1], got " + fmt_real(p.prob_cube));
    require(r, p.prob_having >= 0.0 && p.prob_having <= 1.0, "PROB_HAVING",
            "must be in [0,1], got " + fmt_real(p.prob_having));
    require(r, p.avg_nb_dd >= 0.0, "AVG_NB_DD", "must be >= 0, got " + fmt_real(p.avg_nb_dd));
    return r;
}

LowLevelParams derive_low_level(const HighLevelParams& high, SeededRng& rng) {
    ValidationReport check = validate(high);
    if (!check.ok()) {
        throw ValidationError("derive_low_level: invalid high-level parameters\n" +
                              check.to_string());
    }
    const double s = high.spread;
    LowLevelParams low;

    low.nb_ft = static_cast<int>(gaussian_int(rng, high.avg_nb_ft, s, 1));
    for (int f = 0; f < low.nb_ft; ++f) {
        low.nb_dim.push_back(static_cast<int>(gaussian_int(rng, high.avg_nb_dim, s, 1)));
    }
    int tot = static_cast<int>(gaussian_int(rng, high.avg_tot_nb_dim, s, 1));
    int max_nb_dim = *std::max_element(low.nb_dim.begin(), low.nb_dim.end());
    low.tot_nb_dim = std::max(tot, max_nb_dim);

    for (int f = 0; f < low.nb_ft; ++f) {
        low.nb_meas.push_back(static_cast<int>(gaussian_int(rng, high.avg_nb_meas, s, 0)));
    }
    for (int f = 0; f < low.nb_ft; ++f) {
        low.density.push_back(gaussian_real(rng, high.avg_density, s, kMinDensity, 1.0));
    }
    for (int d = 0; d < low.tot_nb_dim; ++d) {
        low.nb_levels.push_back(static_cast<int>(gaussian_int(rng, high.avg_nb_levels, s, 1)));
    }
    for (int d = 0; d < low.tot_nb_dim; ++d) {
        low.hhlevel_size.push_back(
            static_cast<int>(gaussian_int(rng, high.avg_hhlevel_size, s, 1)));
    }
    for (int d = 0; d < low.tot_nb_dim; ++d) {
        low.dim_sfactor.push_back(
            gaussian_real(rng, high.dim_sfactor, s, 1.0, std::numeric_limits<double>::max()));
    }
    for (int d = 0; d < low.tot_nb_dim; ++d) {
        std::vector<int> per_level;
        per_level.reserve(static_cast<std::size_t>(low.nb_levels[static_cast<std::size_t>(d)]));
        for (int h = 0; h < low.nb_levels[static_cast<std::size_t>(d)]; ++h) {
            per_level.push_back(static_cast<int>(gaussian_int(rng, high.avg_nb_att, s, 0)));
        }
        low.nb_att.push_back(std::move(per_level));
    }

    // Constellation wiring: NB_DIM(f) distinct dimensions per fact table,
    // uniform without replacement over the shared pool.
    for (int f = 0; f < low.nb_ft; ++f) {
        std::vector<int> pool(static_cast<std::size_t>(low.tot_nb_dim));
        std::iota(pool.begin(), pool.end(), 1);
        std::vector<int> picked;
        const int want = low.nb_dim[static_cast<std::size_t>(f)];
        for (int k = 0; k < want; ++k) {
            std::size_t i = static_cast<std::size_t>(rng.uniform_below(pool.size()));
            picked.push_back(pool[i]);
            pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(i));
        }
        std::sort(picked.begin(), picked.end());
        low.dim_assignment.push_back(std::move(picked));
    }
    return low;
}

}  // namespace dweb
