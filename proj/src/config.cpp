#include "clic/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "clic/error.hpp"

namespace clic {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct Field {
    std::function<void(Config&, const std::string&)> set;
    std::function<std::string(const Config&)> get;
};

template <typename T>
T parse_number(const std::string& value, const std::string& key) {
    T out{};
    if constexpr (std::is_floating_point_v<T>) {
        try {
            std::size_t pos = 0;
            out = static_cast<T>(std::stod(value, &pos));
            if (pos != value.size()) throw std::invalid_argument(value);
        } catch (const std::logic_error&) {
            throw ConfigError("config key '" + key + "': bad number '" + value + "'");
        }
    } else {
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
        if (ec != std::errc() || ptr != value.data() + value.size())
            throw ConfigError("config key '" + key + "': bad integer '" + value + "'");
    }
    return out;
}

bool parse_bool(const std::string& value, const std::string& key) {
    if (value == "on" || value == "true" || value == "1") return true;
    if (value == "off" || value == "false" || value == "0") return false;
    throw ConfigError("config key '" + key + "': expected on/off, got '" + value + "'");
}

const std::map<std::string, Field>& schema() {
#define CLIC_STR_FIELD(name)                                                        \
    {#name, {[](Config& c, const std::string& v) { c.name = v; },                   \
             [](const Config& c) { return c.name; }}}
#define CLIC_NUM_FIELD(name, type)                                                  \
    {#name, {[](Config& c, const std::string& v) { c.name = parse_number<type>(v, #name); }, \
             [](const Config& c) { return fmt_double(static_cast<double>(c.name)); }}}
#define CLIC_INT_FIELD(name, type)                                                  \
    {#name, {[](Config& c, const std::string& v) { c.name = parse_number<type>(v, #name); }, \
             [](const Config& c) { return std::to_string(c.name); }}}
#define CLIC_BOOL_FIELD(name)                                                       \
    {#name, {[](Config& c, const std::string& v) { c.name = parse_bool(v, #name); }, \
             [](const Config& c) { return c.name ? std::string("on") : std::string("off"); }}}

    static const std::map<std::string, Field> fields = {
        CLIC_STR_FIELD(dataset),
        CLIC_STR_FIELD(lexicon),
        CLIC_STR_FIELD(pairing),
        CLIC_INT_FIELD(max_candidates, std::size_t),
        CLIC_INT_FIELD(k_extra, std::size_t),
        CLIC_INT_FIELD(final_resize, std::size_t),
        CLIC_INT_FIELD(batch_size, std::size_t),
        CLIC_INT_FIELD(total_steps, std::size_t),
        CLIC_NUM_FIELD(warmup_frac, double),
        CLIC_NUM_FIELD(lr_start, double),
        CLIC_NUM_FIELD(lr_peak, double),
        CLIC_NUM_FIELD(lr_end, double),
        CLIC_NUM_FIELD(beta1, double),
        CLIC_NUM_FIELD(beta2, double),
        CLIC_NUM_FIELD(adam_eps, double),
        CLIC_NUM_FIELD(weight_decay, double),
        CLIC_NUM_FIELD(lambda_cont, double),
        CLIC_NUM_FIELD(lambda_sneg, double),
        CLIC_NUM_FIELD(lambda_uni, double),
        CLIC_STR_FIELD(freeze),
        CLIC_BOOL_FIELD(alternate),
        CLIC_NUM_FIELD(temperature, double),
        CLIC_INT_FIELD(seed, std::uint64_t),
        CLIC_INT_FIELD(emb_dim, std::size_t),
        CLIC_STR_FIELD(method),
        CLIC_BOOL_FIELD(single_image),
        CLIC_INT_FIELD(warmstart_steps, std::size_t),
        CLIC_NUM_FIELD(warmstart_lr, double),
        CLIC_INT_FIELD(threads, std::size_t),
        CLIC_INT_FIELD(toy_objects, std::size_t),
        CLIC_INT_FIELD(toy_attributes, std::size_t),
        CLIC_INT_FIELD(toy_scenes, std::size_t),
        CLIC_NUM_FIELD(toy_noise, double),
        CLIC_INT_FIELD(toy_seed, std::uint64_t),
        CLIC_INT_FIELD(eval_max_items, std::size_t),
    };
#undef CLIC_STR_FIELD
#undef CLIC_NUM_FIELD
#undef CLIC_INT_FIELD
#undef CLIC_BOOL_FIELD
    return fields;
}

} // namespace

Config parse_config(const std::string& text, const std::string& origin) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::map<std::string, bool> seen;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        const auto it = schema().find(key);
        if (it == schema().end())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": unknown key '" + key +
                              "'");
        if (seen[key])
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key +
                              "'");
        seen[key] = true;
        it->second.set(cfg, value);
    }
    cfg.train_config(); // validates enum-like values
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

std::string Config::canonical() const {
    std::ostringstream os;
    for (const auto& [key, field] : schema()) os << key << " = " << field.get(*this) << "\n";
    return os.str();
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t Config::hash() const { return fnv1a64(canonical()); }

TrainConfig Config::train_config() const {
    TrainConfig tc;
    tc.batch_size = batch_size;
    tc.total_steps = total_steps;
    tc.schedule = {lr_start, lr_peak, lr_end, warmup_frac, total_steps};
    tc.adamw = {beta1, beta2, adam_eps, weight_decay};
    tc.weights = {lambda_cont, lambda_sneg, lambda_uni};
    if (freeze == "none")
        tc.freeze = Freeze::None;
    else if (freeze == "vision")
        tc.freeze = Freeze::Vision;
    else if (freeze == "text")
        tc.freeze = Freeze::Text;
    else
        throw ConfigError("freeze must be none|vision|text, got '" + freeze + "'");
    tc.alternate_clip_iters = alternate;
    tc.k_extra = k_extra;
    if (k_extra > 3) throw ConfigError("k_extra must be in [0, 3]");
    tc.temperature = temperature;
    tc.seed = seed;
    tc.emb_dim = emb_dim;
    if (method == "clic")
        tc.method = TrainMethod::Clic;
    else if (method == "negclip")
        tc.method = TrainMethod::NegClip;
    else
        throw ConfigError("method must be clic|negclip, got '" + method + "'");
    tc.single_image = single_image;
    tc.warmstart_steps = warmstart_steps;
    tc.warmstart_lr = warmstart_lr;
    tc.pairing = gen_config().pairing;
    tc.threads = threads;
    tc.config_hash = hash();
    return tc;
}

GenConfig Config::gen_config() const {
    GenConfig gc;
    gc.k_extra = k_extra;
    if (pairing == "random")
        gc.pairing.kind = PairingStrategy::Kind::RandomSameOrientation;
    else if (pairing == "common_noun")
        gc.pairing.kind = PairingStrategy::Kind::CommonNoun;
    else
        throw ConfigError("pairing must be random|common_noun, got '" + pairing + "'");
    gc.pairing.max_candidates = max_candidates;
    if (max_candidates < 1) throw ConfigError("max_candidates must be >= 1");
    gc.final_resize = final_resize;
    return gc;
}

} // namespace clic
