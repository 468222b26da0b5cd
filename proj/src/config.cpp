#include "starprune/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "starprune/errors.hpp"

namespace starprune {

ScaleSchedule RunConfig::to_schedule() const {
    ScaleSchedule s;
    s.scales = scales;
    s.iterations = iterations;
    s.prune_ratios = ratios;
    s.warmup_scales = warmup;
    s.channels = channels;
    s.clips = clips;
    s.clip_frames = clip_frames;
    return s;
}

ReducerConfig RunConfig::to_reducer() const {
    ReducerConfig r;
    r.kind = reducer_kind_from_name(reducer);
    r.p = p;
    r.seed = reducer_seed;
    return r;
}

void RunConfig::validate() const {
    to_schedule().validate();
    if (backbone != "oracle" && backbone != "mixer")
        throw std::invalid_argument("config.backbone: must be oracle or mixer, got '" +
                                    backbone + "'");
    reducer_kind_from_name(reducer);  // throws on unknown names
    if (!(p >= 1.0))
        throw std::invalid_argument("config.p: must be >= 1 (or inf)");
    if (codebook_size < 2)
        throw std::invalid_argument("config.codebook_size: must be >= 2");
    if (!(codebook_spread > 0.0))
        throw std::invalid_argument("config.codebook_spread: must be > 0");
    if (target != "bandlimited" && target != "moving_square" && target != "frozen_lowband" &&
        target != "fst1")
        throw std::invalid_argument("config.target: unknown generator '" + target + "'");
    if (target == "fst1" && target_path.empty())
        throw std::invalid_argument("config.target_path: required when target = fst1");
    if (!(target_cutoff > 0.0 && target_cutoff <= 1.0))
        throw std::invalid_argument("config.target_cutoff: must be in (0, 1]");
    if (target_waves < 1)
        throw std::invalid_argument("config.target_waves: must be >= 1");
    if (!(peak > 0.0))
        throw std::invalid_argument("config.peak: must be > 0");
    if (mixer_heads < 1 || mixer_layers < 1)
        throw std::invalid_argument("config.mixer_heads/mixer_layers: must be >= 1");
    if (channels % mixer_heads != 0 && backbone == "mixer")
        throw std::invalid_argument("config.mixer_heads: must divide channels");
    if (seeds < 1)
        throw std::invalid_argument("config.seeds: must be >= 1");
    if (bands < 2)
        throw std::invalid_argument("config.bands: must be >= 2");
    if (!(highfreq_cutoff > 0.0 && highfreq_cutoff < 0.5 * std::sqrt(2.0)))
        throw std::invalid_argument("config.highfreq_cutoff: must be in (0, 0.5*sqrt(2))");
    if (!(study_ratio >= 0.0 && study_ratio <= 0.5))
        throw std::invalid_argument("config.study_ratio: must be in [0, 0.5]");
    if (ratio_axis.empty() || p_axis.empty() || method_axis.empty())
        throw std::invalid_argument("config: axis lists must not be empty");
    for (double r : ratio_axis)
        if (r < 0.0 || r > 1.0)
            throw std::invalid_argument("config.ratio_axis: values must be in [0, 1]");
    for (double pv : p_axis)
        if (!(pv >= 1.0))
            throw std::invalid_argument("config.p_axis: values must be >= 1 (or inf)");
    for (const std::string& m : method_axis)
        if (m != "random" && m != "spatial_only" && m != "sttp")
            throw std::invalid_argument("config.method_axis: unknown method '" + m + "'");
}

// ---------------------------------------------------------------------------
// formatting / parsing primitives

std::string format_double(double v) {
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    for (int precision : {15, 16, 17}) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v)
            return buf;
    }
    return buf;
}

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(trim(cur));
    if (parts.size() == 1 && parts[0].empty())
        parts.clear();
    return parts;
}

double parse_double(const std::string& key, const std::string& v) {
    if (v == "inf")
        return kMaxNorm;
    try {
        size_t used = 0;
        const double out = std::stod(v, &used);
        if (used != v.size())
            throw std::invalid_argument("");
        return out;
    } catch (const std::exception&) {
        throw std::invalid_argument("config." + key + ": not a number: '" + v + "'");
    }
}

long long parse_int(const std::string& key, const std::string& v) {
    try {
        size_t used = 0;
        const long long out = std::stoll(v, &used);
        if (used != v.size())
            throw std::invalid_argument("");
        return out;
    } catch (const std::exception&) {
        throw std::invalid_argument("config." + key + ": not an integer: '" + v + "'");
    }
}

uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        size_t used = 0;
        const unsigned long long out = std::stoull(v, &used);
        if (used != v.size())
            throw std::invalid_argument("");
        return out;
    } catch (const std::exception&) {
        throw std::invalid_argument("config." + key + ": not an unsigned integer: '" + v + "'");
    }
}

Extent2 parse_extent(const std::string& key, const std::string& v) {
    const size_t x = v.find('x');
    if (x == std::string::npos)
        throw std::invalid_argument("config." + key + ": expected HxW, got '" + v + "'");
    Extent2 e;
    e.rows = static_cast<int>(parse_int(key, trim(v.substr(0, x))));
    e.cols = static_cast<int>(parse_int(key, trim(v.substr(x + 1))));
    return e;
}

std::string join_doubles(const std::vector<double>& xs) {
    std::string out;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ",";
        out += format_double(xs[i]);
    }
    return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#')
            continue;
        const size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value, got '" + stripped + "'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));

        if (key == "scales") {
            c.scales.clear();
            for (const std::string& part : split(value, ','))
                c.scales.push_back(parse_extent(key, part));
        } else if (key == "iterations") {
            c.iterations.clear();
            for (const std::string& part : split(value, ','))
                c.iterations.push_back(static_cast<int>(parse_int(key, part)));
        } else if (key == "ratios") {
            c.ratios.clear();
            for (const std::string& part : split(value, ','))
                c.ratios.push_back(parse_double(key, part));
        } else if (key == "warmup") {
            c.warmup = static_cast<int>(parse_int(key, value));
        } else if (key == "channels") {
            c.channels = static_cast<int>(parse_int(key, value));
        } else if (key == "clips") {
            c.clips = static_cast<int>(parse_int(key, value));
        } else if (key == "clip_frames") {
            c.clip_frames = static_cast<int>(parse_int(key, value));
        } else if (key == "backbone") {
            c.backbone = value;
        } else if (key == "backbone_seed") {
            c.backbone_seed = parse_u64(key, value);
        } else if (key == "mixer_heads") {
            c.mixer_heads = static_cast<int>(parse_int(key, value));
        } else if (key == "mixer_layers") {
            c.mixer_layers = static_cast<int>(parse_int(key, value));
        } else if (key == "reducer") {
            c.reducer = value;
        } else if (key == "p") {
            c.p = parse_double(key, value);
        } else if (key == "reducer_seed") {
            c.reducer_seed = parse_u64(key, value);
        } else if (key == "codebook_size") {
            c.codebook_size = static_cast<int>(parse_int(key, value));
        } else if (key == "codebook_seed") {
            c.codebook_seed = parse_u64(key, value);
        } else if (key == "codebook_spread") {
            c.codebook_spread = parse_double(key, value);
        } else if (key == "target") {
            c.target = value;
        } else if (key == "target_path") {
            c.target_path = value;
        } else if (key == "target_seed") {
            c.target_seed = parse_u64(key, value);
        } else if (key == "target_cutoff") {
            c.target_cutoff = parse_double(key, value);
        } else if (key == "target_waves") {
            c.target_waves = static_cast<int>(parse_int(key, value));
        } else if (key == "peak") {
            c.peak = parse_double(key, value);
        } else if (key == "out_dir") {
            c.out_dir = value;
        } else if (key == "repetitions") {
            c.repetitions = static_cast<int>(parse_int(key, value));
        } else if (key == "seeds") {
            c.seeds = static_cast<int>(parse_int(key, value));
        } else if (key == "bands") {
            c.bands = static_cast<int>(parse_int(key, value));
        } else if (key == "highfreq_cutoff") {
            c.highfreq_cutoff = parse_double(key, value);
        } else if (key == "ratio_axis") {
            c.ratio_axis.clear();
            for (const std::string& part : split(value, ','))
                c.ratio_axis.push_back(parse_double(key, part));
        } else if (key == "p_axis") {
            c.p_axis.clear();
            for (const std::string& part : split(value, ','))
                c.p_axis.push_back(parse_double(key, part));
        } else if (key == "method_axis") {
            c.method_axis = split(value, ',');
        } else if (key == "study_ratio") {
            c.study_ratio = parse_double(key, value);
        } else {
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": unknown key '" + key + "'");
        }
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream out;
    out << "scales = ";
    for (size_t i = 0; i < c.scales.size(); ++i) {
        if (i) out << ",";
        out << c.scales[i].rows << "x" << c.scales[i].cols;
    }
    out << "\niterations = ";
    for (size_t i = 0; i < c.iterations.size(); ++i) {
        if (i) out << ",";
        out << c.iterations[i];
    }
    out << "\nratios = " << join_doubles(c.ratios);
    out << "\nwarmup = " << c.warmup;
    out << "\nchannels = " << c.channels;
    out << "\nclips = " << c.clips;
    out << "\nclip_frames = " << c.clip_frames;
    out << "\nbackbone = " << c.backbone;
    out << "\nbackbone_seed = " << c.backbone_seed;
    out << "\nmixer_heads = " << c.mixer_heads;
    out << "\nmixer_layers = " << c.mixer_layers;
    out << "\nreducer = " << c.reducer;
    out << "\np = " << format_double(c.p);
    out << "\nreducer_seed = " << c.reducer_seed;
    out << "\ncodebook_size = " << c.codebook_size;
    out << "\ncodebook_seed = " << c.codebook_seed;
    out << "\ncodebook_spread = " << format_double(c.codebook_spread);
    out << "\ntarget = " << c.target;
    out << "\ntarget_path = " << c.target_path;
    out << "\ntarget_seed = " << c.target_seed;
    out << "\ntarget_cutoff = " << format_double(c.target_cutoff);
    out << "\ntarget_waves = " << c.target_waves;
    out << "\npeak = " << format_double(c.peak);
    out << "\nout_dir = " << c.out_dir;
    out << "\nrepetitions = " << c.repetitions;
    out << "\nseeds = " << c.seeds;
    out << "\nbands = " << c.bands;
    out << "\nhighfreq_cutoff = " << format_double(c.highfreq_cutoff);
    out << "\nratio_axis = " << join_doubles(c.ratio_axis);
    out << "\np_axis = " << join_doubles(c.p_axis);
    out << "\nmethod_axis = ";
    for (size_t i = 0; i < c.method_axis.size(); ++i) {
        if (i) out << ",";
        out << c.method_axis[i];
    }
    out << "\nstudy_ratio = " << format_double(c.study_ratio);
    out << "\n";
    return out.str();
}

void save_config(const std::string& path, const RunConfig& config) {
    std::ofstream out(path);
    if (!out)
        throw IoError("config: cannot write '" + path + "'");
    out << serialize_config(config);
}

}  // namespace starprune
