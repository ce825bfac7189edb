#include "arborwalk/cli/manifest.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>

namespace arborwalk::cli {

namespace {

using nlohmann::json;

const std::map<std::string, Kind, std::less<>> kKinds = {
    {"return_prob", Kind::return_prob}, {"wiener", Kind::wiener},
    {"green_moments", Kind::green_moments}, {"lyapunov", Kind::lyapunov},
    {"diagram_q3", Kind::diagram_q3}, {"diagram_q4", Kind::diagram_q4},
    {"blocks", Kind::blocks}, {"covariance", Kind::covariance},
    {"paths_audit", Kind::paths_audit},
};

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ManifestError(path + ": " + what);
}

// A JSON object that rejects unknown keys and reports errors by path.
class Reader {
public:
    Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) fail(path_.empty() ? "<root>" : path_, "expected an object");
    }

    ~Reader() noexcept(false) {
        if (std::uncaught_exceptions() > 0) return;
        for (const auto& [key, value] : node_.items()) {
            if (!seen_.contains(key)) fail(child(key), "unknown field");
        }
    }

    bool has(const std::string& key) {
        seen_.insert(key);
        return node_.contains(key);
    }

    const json& at(const std::string& key) {
        if (!has(key)) fail(child(key), "missing required field");
        return node_.at(key);
    }

    std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    template <typename T>
    T get(const std::string& key, T fallback) {
        if (!has(key)) return fallback;
        return convert<T>(node_.at(key), child(key));
    }

    template <typename T>
    T require(const std::string& key) {
        return convert<T>(at(key), child(key));
    }

    template <typename T>
    static T convert(const json& v, const std::string& path) {
        if constexpr (std::is_same_v<T, std::string>) {
            if (!v.is_string()) fail(path, "expected a string");
            return v.get<std::string>();
        } else if constexpr (std::is_same_v<T, double>) {
            if (!v.is_number()) fail(path, "expected a number");
            const double d = v.get<double>();
            if (!std::isfinite(d)) fail(path, "expected a finite number");
            return d;
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
            if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
                fail(path, "expected a non-negative integer");
            }
            return v.get<std::uint64_t>();
        } else if constexpr (std::is_integral_v<T>) {
            if (!v.is_number_integer()) fail(path, "expected an integer");
            return static_cast<T>(v.get<std::int64_t>());
        } else {
            static_assert(sizeof(T) == 0, "unsupported manifest type");
        }
    }

private:
    const json& node_;
    std::string path_;
    std::set<std::string> seen_;
};

std::vector<double> number_list(const json& v, const std::string& path) {
    if (!v.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t k = 0; k < v.size(); ++k) {
        out.push_back(Reader::convert<double>(v[k], path + "[" + std::to_string(k) + "]"));
    }
    return out;
}

std::vector<double> grid_values(const json& v, const std::string& path) {
    if (v.is_number()) return {Reader::convert<double>(v, path)};
    if (v.is_array()) {
        auto out = number_list(v, path);
        if (out.empty()) fail(path, "empty parameter list");
        return out;
    }
    Reader range(v, path);
    const double from = range.require<double>("from");
    const double to = range.require<double>("to");
    const double step = range.require<double>("step");
    if (!(step > 0.0) || to < from) fail(path, "range needs step > 0 and to >= from");
    const auto count = static_cast<int>(std::floor((to - from) / step + 1e-9)) + 1;
    if (count > 100000) fail(path, "range has too many points");
    std::vector<double> out;
    for (int k = 0; k < count; ++k) out.push_back(from + k * step);
    return out;
}

CoinSpec parse_coin(const json& v) {
    Reader r(v, "coin");
    CoinSpec c;
    c.family = r.get<std::string>("family", "identity");
    static const std::set<std::string> families = {"identity", "permutation", "q3_delocalizing",
                                                   "q3_localizing", "q4", "haar"};
    if (!families.contains(c.family)) fail("coin.family", "unknown family '" + c.family + "'");
    c.index = r.get<int>("index", 1);
    c.q4_kind = r.get<std::string>("kind", "");
    c.permutation = r.get<std::string>("permutation", "");
    if (r.has("phases")) c.phases = number_list(v.at("phases"), "coin.phases");
    if (r.has("params")) {
        Reader params(v.at("params"), "coin.params");
        static const std::map<std::string, std::set<std::string>> allowed = {
            {"identity", {}},          {"permutation", {}},
            {"q3_delocalizing", {"r"}}, {"q3_localizing", {"r"}},
            {"q4", {"psi", "xi"}},      {"haar", {"seed"}},
        };
        const auto& names = allowed.at(c.family);
        for (const auto& [key, value] : v.at("params").items()) {
            if (!names.contains(key)) {
                fail("coin.params." + key, "not a parameter of the " + c.family + " family");
            }
            params.has(key);
            c.grid[key] = grid_values(value, "coin.params." + key);
        }
    }
    if (r.has("perturb")) {
        Reader p(v.at("perturb"), "coin.perturb");
        c.perturb_distance = p.require<double>("distance");
        c.perturb_seed = p.get<std::uint64_t>("seed", 0);
    }
    return c;
}

DisorderSpec parse_disorder(const json& v) {
    Reader r(v, "disorder");
    DisorderSpec d;
    d.distribution = r.get<std::string>("distribution", "none");
    if (d.distribution == "interval") {
        d.a = r.require<double>("a");
        d.b = r.require<double>("b");
    } else if (d.distribution == "table") {
        d.weights = number_list(r.at("weights"), "disorder.weights");
    } else if (d.distribution != "none" && d.distribution != "uniform") {
        fail("disorder.distribution", "unknown distribution '" + d.distribution + "'");
    }
    return d;
}

void check_positive(const std::string& path, double v) {
    if (!(v > 0)) fail(path, "must be positive");
}

}  // namespace

std::string kind_name(Kind kind) {
    for (const auto& [name, k] : kKinds) {
        if (k == kind) return name;
    }
    return "unknown";
}

Manifest parse_manifest(const nlohmann::json& doc) {
    Manifest m;
    m.raw = doc;
    Reader r(doc, "");
    m.schema_version = r.require<int>("schema_version");
    if (m.schema_version != kSchemaVersion) {
        fail("schema_version", "unsupported version " + std::to_string(m.schema_version));
    }
    const auto kind = r.require<std::string>("kind");
    const auto it = kKinds.find(kind);
    if (it == kKinds.end()) fail("kind", "unknown experiment kind '" + kind + "'");
    m.kind = it->second;
    m.q = r.get<int>("q", 3);
    if (m.q < 3 || m.q > 32) fail("q", "must lie in 3..32");
    if (r.has("coin")) m.coin = parse_coin(doc.at("coin"));
    if (r.has("disorder")) m.disorder = parse_disorder(doc.at("disorder"));
    if (r.has("boundary_phases")) m.boundary_phases = number_list(doc.at("boundary_phases"), "boundary_phases");
    m.seed = r.get<std::uint64_t>("seed", 1);
    m.realizations = r.get<int>("realizations", 1);
    check_positive("realizations", m.realizations);
    m.steps = r.get<int>("steps", 20);
    if (m.steps < 0) fail("steps", "must be non-negative");
    m.L = r.get<int>("L", 3);
    if (m.L < 1 || m.L % 2 == 0) fail("L", "must be odd and positive");
    m.radius = r.get<int>("radius", 4);
    if (m.radius < 0) fail("radius", "must be non-negative");
    m.center = r.get<std::string>("center", "e");
    if (r.has("source")) {
        Reader s(doc.at("source"), "source");
        m.source_vertex = s.get<std::string>("x", "e");
        m.source_letter = s.get<std::string>("tau", "");
    }
    m.s = r.get<double>("s", 0.2);
    if (r.has("z")) {
        Reader z(doc.at("z"), "z");
        m.z_count = z.get<int>("count", 16);
        m.z_radius = z.get<double>("radius", 0.98);
        check_positive("z.count", m.z_count);
    }
    if (r.has("lyapunov")) {
        Reader l(doc.at("lyapunov"), "lyapunov");
        m.matrices = l.get<std::int64_t>("matrices", 100'000);
        m.z_phase = l.get<double>("z_phase", 0.0);
        m.chains = l.get<int>("chains", 8);
        check_positive("lyapunov.chains", m.chains);
    }
    if (r.has("paths")) {
        Reader p(doc.at("paths"), "paths");
        m.n_max = p.get<int>("n_max", 4);
        if (p.has("parities")) {
            m.parities.clear();
            for (double v : number_list(doc.at("paths").at("parities"), "paths.parities")) {
                if (v != 0.0 && v != 1.0) fail("paths.parities", "entries must be 0 or 1");
                m.parities.push_back(static_cast<int>(v));
            }
        }
    }
    m.translations = r.get<int>("translations", 20);
    m.max_conditioning_failures = r.get<int>("max_conditioning_failures", 0);
    if (m.max_conditioning_failures < 0) fail("max_conditioning_failures", "must be non-negative");
    m.output_dir = r.get<std::string>("output_dir", "");

    // Resolve everything that can fail now, so validate catches it.
    const tree::Alphabet alphabet(m.q);
    if (m.source_letter.empty()) m.source_letter = alphabet.name(0);
    try {
        tree::parse_word(m.center, alphabet);
        tree::parse_word(m.source_vertex, alphabet);
        alphabet.parse_letter(m.source_letter);
    } catch (const InputError& e) {
        fail("center/source", e.what());
    }
    for (const GridPoint& point : grid_points(m.coin)) {
        try {
            build_coin(m, point);
        } catch (const ManifestError&) {
            throw;
        } catch (const InputError& e) {
            fail("coin", e.what());
        }
    }
    try {
        build_disorder(m.disorder, m.seed);
        boundary_decoration(m);
    } catch (const ManifestError&) {
        throw;
    } catch (const InputError& e) {
        fail("disorder", e.what());
    }
    return m;
}

Manifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ManifestError(path.string() + ": cannot open manifest");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw ManifestError(path.string() + ": " + e.what());
    }
    return parse_manifest(doc);
}

std::vector<GridPoint> grid_points(const CoinSpec& spec) {
    std::vector<GridPoint> points{{}};
    for (const auto& [name, values] : spec.grid) {
        std::vector<GridPoint> next;
        for (const GridPoint& p : points) {
            for (double v : values) {
                GridPoint q = p;
                q.emplace_back(name, v);
                next.push_back(std::move(q));
            }
        }
        points = std::move(next);
    }
    return points;
}

double grid_value(const GridPoint& point, const std::string& name, double fallback) {
    for (const auto& [key, value] : point) {
        if (key == name) return value;
    }
    return fallback;
}

coin::CoinMatrix build_coin(const Manifest& m, const GridPoint& point) {
    const CoinSpec& spec = m.coin;
    const tree::Alphabet alphabet(m.q);
    const auto need_q = [&](int q) {
        if (m.q != q) fail("coin.family", spec.family + " needs q = " + std::to_string(q));
    };
    std::optional<coin::CoinMatrix> c;
    if (spec.family == "identity") {
        c = coin::identity_coin(m.q);
    } else if (spec.family == "permutation") {
        if (spec.permutation.empty()) fail("coin.permutation", "missing required field");
        c = coin::permutation_coin(coin::parse_permutation(spec.permutation, alphabet));
    } else if (spec.family == "q3_delocalizing") {
        need_q(3);
        c = coin::family_q3_delocalizing(spec.index, grid_value(point, "r", 0.5));
    } else if (spec.family == "q3_localizing") {
        need_q(3);
        c = coin::family_q3_localizing(spec.index, grid_value(point, "r", 0.5));
    } else if (spec.family == "q4") {
        need_q(4);
        if (spec.q4_kind.empty()) fail("coin.kind", "missing required field");
        c = coin::family_q4(coin::parse_q4_kind(spec.q4_kind), grid_value(point, "psi", 0.0),
                            grid_value(point, "xi", 0.0));
    } else if (spec.family == "haar") {
        c = coin::haar_random(m.q, static_cast<std::uint64_t>(grid_value(point, "seed", 0.0)));
    }
    if (!spec.phases.empty()) {
        if (static_cast<int>(spec.phases.size()) != m.q) fail("coin.phases", "needs q entries");
        c = coin::decorate(*c, {spec.phases});
    }
    if (spec.perturb_distance) {
        c = coin::perturb(*c, *spec.perturb_distance, spec.perturb_seed);
    }
    return *c;
}

disorder::DisorderField build_disorder(const DisorderSpec& spec, std::uint64_t seed) {
    if (spec.distribution == "uniform") return disorder::DisorderField::uniform_full(seed);
    if (spec.distribution == "interval") return disorder::DisorderField::uniform_interval(seed, spec.a, spec.b);
    if (spec.distribution == "table") return disorder::DisorderField::density_table(seed, spec.weights);
    return disorder::DisorderField::none();
}

coin::PhaseDecoration boundary_decoration(const Manifest& m) {
    if (m.boundary_phases.empty()) return coin::PhaseDecoration::zero(m.q);
    if (static_cast<int>(m.boundary_phases.size()) != m.q) fail("boundary_phases", "needs q entries");
    return {m.boundary_phases};
}

walk::BasisState source_state(const Manifest& m) {
    const tree::Alphabet alphabet(m.q);
    return {tree::parse_word(m.source_vertex, alphabet), alphabet.parse_letter(m.source_letter)};
}

}  // namespace arborwalk::cli
