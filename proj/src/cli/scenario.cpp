#include "varlp/cli/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "varlp/format.hpp"

namespace varlp::cli {

namespace {

// A bad field, located by its JSON path ("exponent.value", "probes[2].name").
class FieldError : public DomainError {
public:
    FieldError(std::string path, const std::string& message) : DomainError(message), path_(std::move(path)) {}
    [[nodiscard]] const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

std::string join(const std::string& prefix, const std::string& key)
{
    return prefix.empty() ? key : prefix + "." + key;
}

std::string index_path(const std::string& prefix, std::size_t k)
{
    return prefix + "[" + std::to_string(k) + "]";
}

// Line of every key and array element in a well-formed JSON text.
class LineIndex {
public:
    explicit LineIndex(const std::string& text) : text_(text) { value(""); }

    [[nodiscard]] int line_of(std::string path) const
    {
        for (;;) {
            const auto it = lines_.find(path);
            if (it != lines_.end()) return it->second;
            const auto cut = path.find_last_of(".[");
            if (cut == std::string::npos) return 1;
            path.resize(cut);
        }
    }

private:
    void skip()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            if (text_[pos_] == '\n') ++line_;
            ++pos_;
        }
    }

    std::string string_token()
    {
        std::string out;
        ++pos_;
        while (pos_ < text_.size() && text_[pos_] != '"') {
            if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
            out += text_[pos_++];
        }
        ++pos_;
        return out;
    }

    void value(const std::string& path)
    {
        skip();
        if (pos_ >= text_.size()) return;
        lines_.emplace(path, line_);
        const char c = text_[pos_];
        if (c == '{') {
            ++pos_;
            for (;;) {
                skip();
                if (pos_ >= text_.size() || text_[pos_] == '}') break;
                if (text_[pos_] == ',') {
                    ++pos_;
                    continue;
                }
                const int key_line = line_;
                const std::string key = string_token();
                const std::string child = join(path, key);
                lines_.emplace(child, key_line);
                skip();
                if (pos_ < text_.size() && text_[pos_] == ':') ++pos_;
                value(child);
            }
            ++pos_;
        } else if (c == '[') {
            ++pos_;
            std::size_t k = 0;
            for (;;) {
                skip();
                if (pos_ >= text_.size() || text_[pos_] == ']') break;
                if (text_[pos_] == ',') {
                    ++pos_;
                    continue;
                }
                value(index_path(path, k++));
            }
            ++pos_;
        } else if (c == '"') {
            string_token();
        } else {
            while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != '}' && text_[pos_] != ']' &&
                   !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
        }
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    std::map<std::string, int> lines_;
};

const Json* find(const Json& j, const std::string& key)
{
    const auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

double number(const Json& j, const std::string& key, const std::string& path, std::optional<double> fallback = {})
{
    const Json* v = find(j, key);
    if (!v) {
        if (fallback) return *fallback;
        throw FieldError(join(path, key), "missing field '" + join(path, key) + "'");
    }
    if (!v->is_number()) throw FieldError(join(path, key), "field '" + join(path, key) + "' must be a number");
    return v->get<double>();
}

std::size_t count(const Json& j, const std::string& key, const std::string& path, std::optional<std::size_t> fallback)
{
    const Json* v = find(j, key);
    if (!v) {
        if (fallback) return *fallback;
        throw FieldError(join(path, key), "missing field '" + join(path, key) + "'");
    }
    if (!v->is_number_integer() || v->get<long long>() < 0) {
        throw FieldError(join(path, key), "field '" + join(path, key) + "' must be a non-negative integer");
    }
    return v->get<std::size_t>();
}

std::string text(const Json& j, const std::string& key, const std::string& path, std::optional<std::string> fallback = {})
{
    const Json* v = find(j, key);
    if (!v) {
        if (fallback) return *fallback;
        throw FieldError(join(path, key), "missing field '" + join(path, key) + "'");
    }
    if (!v->is_string()) throw FieldError(join(path, key), "field '" + join(path, key) + "' must be a string");
    return v->get<std::string>();
}

std::vector<double> numbers(const Json& j, const std::string& key, const std::string& path)
{
    const Json* v = find(j, key);
    if (!v) return {};
    if (!v->is_array()) throw FieldError(join(path, key), "field '" + join(path, key) + "' must be an array");
    std::vector<double> out;
    for (std::size_t k = 0; k < v->size(); ++k) {
        if (!(*v)[k].is_number()) {
            throw FieldError(index_path(join(path, key), k), "entries of '" + join(path, key) + "' must be numbers");
        }
        out.push_back((*v)[k].get<double>());
    }
    return out;
}

void require_object(const Json& j, const std::string& path)
{
    if (!j.is_object()) throw FieldError(path, "'" + (path.empty() ? std::string("scenario") : path) + "' must be an object");
}

ExponentSpec exponent_spec(const Json& j, const std::string& path)
{
    require_object(j, path);
    ExponentSpec e;
    e.type = text(j, "type", path);
    if (e.type == "constant") {
        e.value = number(j, "value", path);
        if (!(e.value >= 1.0)) {
            throw FieldError(join(path, "value"), "exponent below 1: p = " + format_number(e.value));
        }
    } else if (e.type == "affine") {
        e.a = number(j, "a", path);
        e.b = number(j, "b", path);
    } else if (e.type == "ex1") {
    } else if (e.type == "table") {
        e.table = numbers(j, "values", path);
        if (e.table.empty()) throw FieldError(join(path, "values"), "table exponent needs at least one value");
        for (std::size_t k = 0; k < e.table.size(); ++k) {
            if (!(e.table[k] >= 1.0)) {
                throw FieldError(index_path(join(path, "values"), k),
                                 "exponent below 1: p = " + format_number(e.table[k]));
            }
        }
    } else {
        throw FieldError(join(path, "type"), "unknown exponent type '" + e.type + "'");
    }
    return e;
}

MapSpec map_spec(const Json& j, const std::string& path)
{
    require_object(j, path);
    MapSpec m;
    m.type = text(j, "type", path);
    if (m.type == "identity") {
    } else if (m.type == "affine") {
        m.a = number(j, "a", path);
        m.b = number(j, "b", path, 0.0);
    } else if (m.type == "power") {
        m.k = number(j, "k", path);
        if (!(m.k > 0.0)) throw FieldError(join(path, "k"), "power map needs k > 0");
    } else if (m.type == "clamp_affine") {
        m.a = number(j, "a", path);
        m.b = number(j, "b", path, 0.0);
        m.y_min = number(j, "min", path);
        m.y_max = number(j, "max", path);
    } else if (m.type == "piecewise") {
        const Json* br = find(j, "branches");
        const std::string bpath = join(path, "branches");
        if (!br || !br->is_array() || br->empty()) throw FieldError(bpath, "piecewise map needs a non-empty 'branches' array");
        for (std::size_t k = 0; k < br->size(); ++k) {
            const std::string p = index_path(bpath, k);
            require_object((*br)[k], p);
            m.segments.push_back(AffineSegment{number((*br)[k], "from", p), number((*br)[k], "to", p),
                                               number((*br)[k], "slope", p), number((*br)[k], "intercept", p)});
        }
    } else {
        throw FieldError(join(path, "type"), "unknown map type '" + m.type + "'");
    }
    return m;
}

Ball ball_spec(const Json& j, const std::string& path)
{
    require_object(j, path);
    Ball b{number(j, "center", path), number(j, "radius", path)};
    if (!(b.radius > 0.0)) throw FieldError(join(path, "radius"), "radius must be positive");
    return b;
}

FamilySpec family_spec(const Json& j, const std::string& path)
{
    require_object(j, path);
    FamilySpec f;
    f.n_centers = count(j, "n_centers", path, std::size_t{10});
    if (find(j, "radii")) f.radii = numbers(j, "radii", path);
    if (find(j, "radii_cells")) {
        f.radii_cells = numbers(j, "radii_cells", path);
        if (!find(j, "radii")) f.radii.clear();
    }
    for (const auto* list : {&f.radii, &f.radii_cells}) {
        const std::string key = list == &f.radii ? "radii" : "radii_cells";
        for (std::size_t k = 0; k < list->size(); ++k) {
            if (!((*list)[k] > 0.0)) throw FieldError(index_path(join(path, key), k), "radius must be positive");
        }
    }
    if (const Json* v = find(j, "interior")) {
        if (!v->is_boolean()) throw FieldError(join(path, "interior"), "field 'interior' must be a boolean");
        f.interior = v->get<bool>();
    }
    if (const Json* v = find(j, "balls")) {
        if (!v->is_array()) throw FieldError(join(path, "balls"), "field 'balls' must be an array");
        for (std::size_t k = 0; k < v->size(); ++k) f.balls.push_back(ball_spec((*v)[k], index_path(join(path, "balls"), k)));
    }
    return f;
}

// Probe parameters that name exponents, maps or balls are validated here so a
// bad value is reported with its line before anything runs.
void validate_probe_params(const Json& params, const std::string& path, const GridSpace& space)
{
    require_object(params, path);
    for (const char* key : {"ball", "A"}) {
        if (const Json* v = find(params, key)) (void)ball_spec(*v, join(path, key));
    }
    if (const Json* v = find(params, "balls")) {
        if (!v->is_array()) throw FieldError(join(path, "balls"), "field 'balls' must be an array");
        for (std::size_t k = 0; k < v->size(); ++k) (void)ball_spec((*v)[k], index_path(join(path, "balls"), k));
    }
    if (const Json* v = find(params, "family")) (void)family_spec(*v, join(path, "family"));
    if (const Json* v = find(params, "exponent")) {
        const ExponentSpec e = exponent_spec(*v, join(path, "exponent"));
        try {
            (void)build_exponent(e, space);
        } catch (const DomainError& err) {
            throw FieldError(join(path, "exponent"), err.what());
        }
    }
    if (const Json* v = find(params, "maps")) {
        if (!v->is_array()) throw FieldError(join(path, "maps"), "field 'maps' must be an array");
        for (std::size_t k = 0; k < v->size(); ++k) {
            const std::string p = index_path(join(path, "maps"), k);
            const MapSpec m = map_spec((*v)[k], p);
            try {
                (void)build_map(m, space);
            } catch (const DomainError& err) {
                throw FieldError(p, err.what());
            }
        }
    }
    for (const char* key : {"deltas", "lambdas", "n_list"}) {
        for (double v : numbers(params, key, path)) {
            if (!(v > 0.0)) throw FieldError(join(path, key), std::string("entries of '") + key + "' must be positive");
        }
    }
}

} // namespace

ScenarioError::ScenarioError(const std::string& origin, int line, const std::string& message)
    : Error(origin + ":" + std::to_string(line) + ": " + message), line_(line)
{
}

const std::vector<std::string>& probe_names()
{
    static const std::vector<std::string> names{
        "geometry",     "regularity",       "compatibility",  "luxemburg_norm",      "modular_properties",
        "holder",       "nonsingularity",   "pushforward",    "empirical_rn",        "cal_U",
        "operator_norm", "change_of_variables", "m1_dichotomy", "lemma_l1i",         "lemma_l2",
        "tail_majorant", "noncompactness",  "weak_compactness", "conjecture"};
    return names;
}

bool is_probe(const std::string& name)
{
    const auto& n = probe_names();
    return std::find(n.begin(), n.end(), name) != n.end();
}

ExponentSpec parse_exponent_spec(const Json& j) { return exponent_spec(j, ""); }
MapSpec parse_map_spec(const Json& j) { return map_spec(j, ""); }
FamilySpec parse_family_spec(const Json& j) { return family_spec(j, ""); }

Scenario parse_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError(path.string(), 0, "cannot open scenario file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario_text(ss.str(), path.string());
}

Scenario parse_scenario_text(const std::string& src, const std::string& origin)
{
    Json j;
    try {
        j = Json::parse(src);
    } catch (const Json::parse_error& e) {
        const std::size_t upto = std::min<std::size_t>(e.byte, src.size());
        const int line = 1 + static_cast<int>(std::count(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
        std::string msg = e.what();
        if (const auto cut = msg.find("parse error"); cut != std::string::npos) msg = msg.substr(cut);
        throw ScenarioError(origin, line, "syntax error: " + msg);
    }

    const LineIndex lines(src);
    Scenario s;
    s.origin = origin;
    try {
        require_object(j, "");
        for (const auto& [key, _] : j.items()) {
            static const std::vector<std::string> known{"name", "space", "exponent", "map",  "family",
                                                        "probes", "output", "levels", "refinement_factor", "seed"};
            if (std::find(known.begin(), known.end(), key) == known.end()) {
                throw FieldError(key, "unknown field '" + key + "'");
            }
        }
        s.name = text(j, "name", "", std::string("scenario"));

        const Json* sp = find(j, "space");
        if (!sp) throw FieldError("space", "missing field 'space'");
        require_object(*sp, "space");
        s.space.lo = number(*sp, "lo", "space");
        s.space.hi = number(*sp, "hi", "space");
        s.space.n_cells = count(*sp, "n_cells", "space", std::nullopt);
        if (!(s.space.hi > s.space.lo)) throw FieldError("space.hi", "space needs hi > lo");
        if (s.space.n_cells < 2) throw FieldError("space.n_cells", "space needs at least 2 cells");

        const Json* ex = find(j, "exponent");
        if (!ex) throw FieldError("exponent", "missing field 'exponent'");
        s.exponent = exponent_spec(*ex, "exponent");

        const Json* mp = find(j, "map");
        s.map = mp ? map_spec(*mp, "map") : MapSpec{};

        if (const Json* fam = find(j, "family")) s.family = family_spec(*fam, "family");

        s.output = text(j, "output", "", std::string("out"));
        s.levels = count(j, "levels", "", std::size_t{1});
        if (s.levels < 1) throw FieldError("levels", "levels must be at least 1");
        s.refinement_factor = count(j, "refinement_factor", "", std::size_t{2});
        if (s.refinement_factor < 2) throw FieldError("refinement_factor", "refinement_factor must be at least 2");
        if (const Json* v = find(j, "seed")) {
            if (!v->is_number_unsigned()) throw FieldError("seed", "field 'seed' must be a non-negative integer");
            s.seed = v->get<std::uint64_t>();
        }

        const GridSpace base = build_space(s, 0);
        try {
            (void)build_exponent(s.exponent, base);
        } catch (const DomainError& e) {
            throw FieldError("exponent", e.what());
        }
        try {
            (void)build_map(s.map, base);
        } catch (const DomainError& e) {
            throw FieldError("map", e.what());
        }

        const Json* pr = find(j, "probes");
        if (!pr || !pr->is_array() || pr->empty()) throw FieldError("probes", "scenario needs a non-empty 'probes' array");
        std::vector<std::string> ids;
        for (std::size_t k = 0; k < pr->size(); ++k) {
            const std::string path = index_path("probes", k);
            const Json& pj = (*pr)[k];
            ProbeSpec p;
            if (pj.is_string()) {
                p.name = pj.get<std::string>();
            } else {
                require_object(pj, path);
                p.name = text(pj, "name", path);
                if (const Json* params = find(pj, "params")) {
                    validate_probe_params(*params, join(path, "params"), base);
                    p.params = *params;
                }
            }
            if (!is_probe(p.name)) throw FieldError(pj.is_string() ? path : join(path, "name"), "unknown probe '" + p.name + "'");
            p.id = pj.is_object() ? text(pj, "id", path, p.name) : p.name;
            if (std::find(ids.begin(), ids.end(), p.id) != ids.end()) {
                throw FieldError(path, "duplicate probe id '" + p.id + "'");
            }
            ids.push_back(p.id);
            p.line = lines.line_of(path);
            s.probes.push_back(std::move(p));
        }
    } catch (const FieldError& e) {
        throw ScenarioError(origin, lines.line_of(e.path()), e.what());
    }
    return s;
}

GridSpace build_space(const Scenario& s, std::size_t level)
{
    std::size_t n = s.space.n_cells;
    for (std::size_t k = 0; k < level; ++k) n *= s.refinement_factor;
    return GridSpace(s.space.lo, s.space.hi, n);
}

ExponentField build_exponent(const ExponentSpec& spec, const GridSpace& space)
{
    if (spec.type == "constant") return ExponentField::constant(space, spec.value);
    if (spec.type == "affine") return ExponentField::affine(space, spec.a, spec.b);
    if (spec.type == "ex1") return ExponentField::example_ex1(space);
    if (spec.type == "table") return ExponentField::table(space, spec.table);
    throw DomainError("unknown exponent type '" + spec.type + "'");
}

PiecewiseMap build_map(const MapSpec& spec, const GridSpace& space)
{
    if (spec.type == "identity") return PiecewiseMap::identity(space);
    if (spec.type == "affine") return PiecewiseMap::affine(space, spec.a, spec.b);
    if (spec.type == "power") return PiecewiseMap::power(space, spec.k);
    if (spec.type == "clamp_affine") return PiecewiseMap::clamp_affine(space, spec.a, spec.b, spec.y_min, spec.y_max);
    if (spec.type == "piecewise") return PiecewiseMap::piecewise_affine(space, spec.segments);
    throw DomainError("unknown map type '" + spec.type + "'");
}

std::vector<Ball> build_family(const FamilySpec& spec, const GridSpace& space)
{
    std::vector<double> radii = spec.radii;
    for (double c : spec.radii_cells) radii.push_back(c * space.width());
    std::sort(radii.begin(), radii.end());
    std::vector<Ball> fam;
    if (spec.n_centers > 0 && !radii.empty()) fam = ball_family(space, spec.n_centers, radii);
    if (spec.interior) fam = interior_balls(space, fam);
    fam.insert(fam.end(), spec.balls.begin(), spec.balls.end());
    return fam;
}

} // namespace varlp::cli
