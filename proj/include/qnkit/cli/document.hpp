#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "qnkit/error.hpp"
#include "qnkit/linalg.hpp"
#include "qnkit/markov/types.hpp"
#include "qnkit/networks/model.hpp"
#include "qnkit/networks/visits.hpp"

namespace qnkit::cli {

using json = nlohmann::json;

inline constexpr int schema_version = 1;

struct MarkovPayload {
    bool continuous = false;
    Matrix matrix;
    std::vector<std::string> states;
    std::optional<std::vector<double>> initial;
    std::vector<std::size_t> absorbing;
    std::string time_unit; ///< empty when the document does not say
};

struct StationPayload {
    std::string system; ///< mm1, mmm, mminf, mm1k, mmmk, mg1, mh1, ammm
    double lambda = 0.0;
    double mu = 0.0;
    std::size_t servers = 1;
    std::size_t capacity = 0;
    double service_mean = 0.0;
    double service_scv = 1.0;
    std::vector<double> rates;
    std::vector<double> probabilities;
    std::vector<std::size_t> states;
};

struct NetworkPayload {
    networks::NetworkModel model;
    std::vector<std::string> classes;
    std::vector<std::string> centers;
};

struct SweepParameter {
    std::string name;
    std::vector<double> values;
    std::string target; ///< document path such as stations[2].service[0]; empty for mix fractions
};

struct PopulationMix {
    std::size_t total = 0;
    std::vector<std::string> fractions; ///< parameter names, one per class but the last
};

struct SweepSpec {
    std::vector<SweepParameter> parameters;
    std::optional<PopulationMix> mix;
};

struct ModelDocument {
    std::string kind;
    std::string name;
    json source;
    std::variant<MarkovPayload, StationPayload, NetworkPayload> payload;
    std::optional<SweepSpec> sweep;
};

namespace detail {

[[noreturn]] inline void schema(const std::string& path, const std::string& what)
{
    fail(errc::schema_error, (path.empty() ? std::string("document") : path) + ": " + what);
}

[[noreturn]] inline void invalid(const std::string& path, const std::string& what)
{
    fail(errc::validation_error, path + ": " + what);
}

/// A JSON node together with its path in the document, for error messages.
class Node {
public:
    Node(const json& j, std::string path) : j_(&j), path_(std::move(path)) {}

    const json& raw() const noexcept { return *j_; }
    const std::string& path() const noexcept { return path_; }

    bool has(const char* key) const { return j_->is_object() && j_->contains(key); }

    Node at(const char* key) const
    {
        if (!j_->is_object())
            schema(path_, "expected an object");
        auto it = j_->find(key);
        if (it == j_->end())
            schema(path_, std::string("missing required field \"") + key + "\"");
        return Node(*it, child(key));
    }

    std::optional<Node> find(const char* key) const
    {
        if (!has(key))
            return std::nullopt;
        return at(key);
    }

    std::size_t size() const
    {
        if (!j_->is_array())
            schema(path_, "expected an array");
        return j_->size();
    }

    Node operator[](std::size_t i) const { return Node((*j_)[i], path_ + "[" + std::to_string(i) + "]"); }

    double number() const
    {
        if (!j_->is_number())
            schema(path_, "expected a number");
        const double v = j_->get<double>();
        if (!std::isfinite(v))
            invalid(path_, "must be finite");
        return v;
    }

    double non_negative() const
    {
        const double v = number();
        if (v < 0.0)
            invalid(path_, "must be non-negative");
        return v;
    }

    double positive() const
    {
        const double v = number();
        if (!(v > 0.0))
            invalid(path_, "must be positive");
        return v;
    }

    std::size_t count() const
    {
        if (!j_->is_number())
            schema(path_, "expected an integer");
        const double v = j_->get<double>();
        if (v < 0.0)
            invalid(path_, "must be non-negative");
        if (!j_->is_number_integer() && v != std::floor(v))
            schema(path_, "expected an integer");
        return static_cast<std::size_t>(v);
    }

    std::string string() const
    {
        if (!j_->is_string())
            schema(path_, "expected a string");
        return j_->get<std::string>();
    }

    std::vector<double> numbers() const
    {
        std::vector<double> v(size());
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = (*this)[i].number();
        return v;
    }

    std::vector<double> non_negatives() const
    {
        std::vector<double> v(size());
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = (*this)[i].non_negative();
        return v;
    }

    std::vector<std::size_t> counts() const
    {
        std::vector<std::size_t> v(size());
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = (*this)[i].count();
        return v;
    }

    std::vector<std::string> strings() const
    {
        std::vector<std::string> v(size());
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = (*this)[i].string();
        return v;
    }

    Matrix matrix(std::size_t rows, std::size_t cols) const
    {
        if (size() != rows)
            schema(path_, "expected " + std::to_string(rows) + " rows");
        Matrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i) {
            const Node r = (*this)[i];
            if (r.size() != cols)
                schema(r.path(), "expected " + std::to_string(cols) + " entries");
            for (std::size_t j = 0; j < cols; ++j)
                m(i, j) = r[j].number();
        }
        return m;
    }

private:
    std::string child(const char* key) const { return path_.empty() ? std::string(key) : path_ + "." + key; }

    const json* j_;
    std::string path_;
};

/// Re-raises module errors met while validating a document as ValidationError.
template <class F>
auto validated(const std::string& path, F&& f)
{
    try {
        return f();
    } catch (const error& e) {
        if (e.code() == errc::schema_error || e.code() == errc::validation_error)
            throw;
        invalid(path, e.what());
    }
}

inline MarkovPayload read_markov(const Node& root, bool continuous)
{
    MarkovPayload p;
    p.continuous = continuous;
    const Node m = root.at("matrix");
    const std::size_t n = m.size();
    if (n == 0)
        schema(m.path(), "matrix must not be empty");
    p.matrix = m.matrix(n, n);
    validated(m.path(), [&] {
        if (continuous)
            return markov::GeneratorMatrix(p.matrix).size();
        return markov::TransitionMatrix(p.matrix).size();
    });
    if (auto s = root.find("states")) {
        p.states = s->strings();
        if (p.states.size() != n)
            schema(s->path(), "expected " + std::to_string(n) + " state labels");
    } else {
        for (std::size_t i = 0; i < n; ++i)
            p.states.push_back(std::to_string(i));
    }
    if (auto init = root.find("initial")) {
        auto v = init->numbers();
        if (v.size() != n)
            schema(init->path(), "expected " + std::to_string(n) + " entries");
        validated(init->path(), [&] { return markov::ProbabilityVector(v).size(); });
        p.initial = std::move(v);
    }
    if (auto a = root.find("absorbing")) {
        p.absorbing = a->counts();
        for (std::size_t i = 0; i < p.absorbing.size(); ++i)
            if (p.absorbing[i] >= n)
                invalid((*a)[i].path(), "state index out of range");
    }
    if (auto u = root.find("time_unit"))
        p.time_unit = u->string();
    return p;
}

inline StationPayload read_station(const Node& root)
{
    StationPayload p;
    const Node sys = root.at("system");
    p.system = sys.string();
    p.lambda = root.at("lambda").positive();
    const auto& s = p.system;
    if (s == "mm1" || s == "mmm" || s == "mminf" || s == "mm1k" || s == "mmmk")
        p.mu = root.at("mu").positive();
    if (s == "mmm" || s == "mmmk") {
        const Node m = root.at("servers");
        p.servers = m.count();
        if (p.servers == 0)
            invalid(m.path(), "must be at least 1");
    }
    if (s == "mm1k" || s == "mmmk")
        p.capacity = root.at("capacity").count();
    if (s == "mg1") {
        p.service_mean = root.at("service_mean").positive();
        p.service_scv = root.at("service_scv").non_negative();
    }
    if (s == "mh1") {
        p.rates = root.at("rates").numbers();
        p.probabilities = root.at("probabilities").numbers();
    }
    if (s == "ammm")
        p.rates = root.at("rates").numbers();
    if (s != "mm1" && s != "mmm" && s != "mminf" && s != "mm1k" && s != "mmmk" && s != "mg1" && s != "mh1"
        && s != "ammm")
        schema(sys.path(), "unknown system \"" + s + "\"");
    if (auto k = root.find("states"))
        p.states = k->counts();
    return p;
}

inline networks::Discipline read_discipline(const Node& n)
{
    const auto s = n.string();
    if (s == "ps")
        return networks::Discipline::ps;
    if (s == "fcfs")
        return networks::Discipline::fcfs;
    if (s == "lcfs-pr")
        return networks::Discipline::lcfs_pr;
    schema(n.path(), "unknown discipline \"" + s + "\" (expected ps, fcfs or lcfs-pr)");
}

/// Per-class values at a station: an array with one entry per class, or a
/// bare number for single-class models.
inline std::vector<double> per_class(const Node& n, std::size_t classes)
{
    if (n.raw().is_number() && classes == 1)
        return {n.non_negative()};
    auto v = n.non_negatives();
    if (v.size() != classes)
        schema(n.path(), "expected " + std::to_string(classes) + " entries, one per class");
    return v;
}

inline NetworkPayload read_network(const Node& root, bool open)
{
    NetworkPayload p;
    auto& m = p.model;
    m.kind = open ? networks::NetworkKind::open : networks::NetworkKind::closed;

    std::size_t classes = 0;
    std::optional<Node> arrivals;
    if (open) {
        if (root.has("arrival_rate") && root.has("arrivals"))
            schema(root.path(), "supply either arrival_rate or arrivals, not both");
        if (auto a = root.find("arrival_rate")) {
            m.arrival_rate = a->non_negatives();
            classes = m.arrival_rate.size();
        } else {
            arrivals = root.at("arrivals");
            classes = arrivals->size();
        }
    } else {
        const Node pop = root.at("population");
        m.population = pop.counts();
        classes = m.population.size();
        if (auto z = root.find("think_time")) {
            m.think_time = z->non_negatives();
            if (m.think_time.size() != classes)
                schema(z->path(), "expected " + std::to_string(classes) + " entries, one per class");
        }
    }
    if (classes == 0)
        schema(root.path(), "model needs at least one class");

    if (auto names = root.find("classes")) {
        p.classes = names->strings();
        if (p.classes.size() != classes)
            schema(names->path(), "expected " + std::to_string(classes) + " class names");
    } else {
        for (std::size_t c = 0; c < classes; ++c)
            p.classes.push_back("class" + std::to_string(c + 1));
    }

    const Node stations = root.at("stations");
    const std::size_t k = stations.size();
    if (k == 0)
        schema(stations.path(), "model needs at least one station");
    m.service = Matrix(classes, k);
    m.visits = Matrix(classes, k);
    m.servers.assign(k, networks::Servers{1});
    m.discipline.assign(k, networks::Discipline::ps);
    bool any_visits = false;
    bool any_ld = false;
    std::vector<std::vector<double>> ld(k);
    for (std::size_t i = 0; i < k; ++i) {
        const Node st = stations[i];
        p.centers.push_back(st.has("name") ? st.at("name").string() : "station" + std::to_string(i + 1));
        const auto service = per_class(st.at("service"), classes);
        for (std::size_t c = 0; c < classes; ++c)
            m.service(c, i) = service[c];
        if (auto v = st.find("visits")) {
            any_visits = true;
            const auto visits = per_class(*v, classes);
            for (std::size_t c = 0; c < classes; ++c)
                m.visits(c, i) = visits[c];
        }
        if (auto s = st.find("servers")) {
            if (s->raw().is_string()) {
                if (s->string() != "inf")
                    schema(s->path(), "expected a positive integer or \"inf\"");
                m.servers[i] = networks::Servers::infinite();
            } else {
                const auto count = s->count();
                if (count == 0)
                    invalid(s->path(), "must be at least 1");
                m.servers[i] = networks::Servers{count};
            }
        }
        if (auto d = st.find("discipline"))
            m.discipline[i] = read_discipline(*d);
        if (auto l = st.find("load_dependent")) {
            ld[i] = l->non_negatives();
            any_ld = true;
        }
    }
    if (any_ld)
        m.load_dependent = std::move(ld);

    const auto routing = root.find("routing");
    if (routing && any_visits)
        schema(root.path(), "supply either visits or routing, not both");
    if (!routing && !any_visits)
        schema(stations.path(), "every station needs visits, or the model needs a routing block");
    if (!routing && arrivals)
        schema(arrivals->path(), "arrivals per station require a routing block; use arrival_rate with visits");
    if (!routing)
        for (std::size_t i = 0; i < k; ++i)
            if (!stations[i].has("visits"))
                schema(stations[i].path(), "missing required field \"visits\"");

    if (routing) {
        if (routing->size() != classes)
            schema(routing->path(), "expected one routing matrix per class");
        std::size_t reference = 0;
        if (auto r = root.find("reference_station")) {
            if (open)
                schema(r->path(), "reference_station applies to closed models only");
            reference = r->count();
            if (reference >= k)
                invalid(r->path(), "station index out of range");
        }
        if (open && !arrivals)
            schema(root.path(), "open models with routing need per-station arrivals");
        if (open)
            m.arrival_rate.assign(classes, 0.0);
        for (std::size_t c = 0; c < classes; ++c) {
            const Node pc = (*routing)[c];
            const Matrix pm = pc.matrix(k, k);
            Vector v;
            if (open) {
                const Node ac = (*arrivals)[c];
                const auto ext = ac.non_negatives();
                if (ext.size() != k)
                    schema(ac.path(), "expected " + std::to_string(k) + " entries, one per station");
                for (double x : ext)
                    m.arrival_rate[c] += x;
                v = validated(pc.path(), [&] { return networks::visits_open(pm, ext); });
            } else {
                v = validated(pc.path(), [&] { return networks::visits_closed(pm, reference); });
            }
            for (std::size_t i = 0; i < k; ++i)
                m.visits(c, i) = v[i];
        }
    }

    validated(root.path().empty() ? std::string("model") : root.path(), [&] {
        networks::validate(m);
        return 0;
    });
    return p;
}

inline SweepSpec read_sweep(const Node& node)
{
    SweepSpec s;
    const Node params = node.at("parameters");
    if (params.size() == 0 || params.size() > 2)
        schema(params.path(), "expected one or two parameters");
    for (std::size_t i = 0; i < params.size(); ++i) {
        const Node p = params[i];
        SweepParameter sp;
        sp.name = p.at("name").string();
        if (p.has("values")) {
            sp.values = p.at("values").numbers();
            if (sp.values.empty())
                schema(p.path() + ".values", "must not be empty");
        } else {
            const double from = p.at("from").number();
            const double to = p.at("to").number();
            const Node pts = p.at("points");
            const std::size_t n = pts.count();
            if (n == 0)
                schema(pts.path(), "must be at least 1");
            for (std::size_t j = 0; j < n; ++j)
                sp.values.push_back(n == 1 ? from
                                           : from + (to - from) * static_cast<double>(j) / static_cast<double>(n - 1));
        }
        if (auto t = p.find("target"))
            sp.target = t->string();
        for (const auto& other : s.parameters)
            if (other.name == sp.name)
                schema(p.path() + ".name", "duplicate parameter name \"" + sp.name + "\"");
        s.parameters.push_back(std::move(sp));
    }
    if (auto mix = node.find("population_mix")) {
        PopulationMix pm;
        pm.total = mix->at("total").count();
        const Node f = mix->at("fractions");
        pm.fractions = f.strings();
        for (std::size_t i = 0; i < pm.fractions.size(); ++i) {
            bool known = false;
            for (const auto& p : s.parameters)
                known = known || p.name == pm.fractions[i];
            if (!known)
                schema(f[i].path(), "unknown parameter \"" + pm.fractions[i] + "\"");
        }
        s.mix = std::move(pm);
    }
    for (std::size_t i = 0; i < s.parameters.size(); ++i) {
        bool used = !s.parameters[i].target.empty();
        if (s.mix)
            for (const auto& f : s.mix->fractions)
                used = used || f == s.parameters[i].name;
        if (!used)
            schema(params[i].path(), "parameter needs a target or must appear in population_mix.fractions");
    }
    return s;
}

inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte)
{
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

} // namespace detail

/// Builds a validated document from parsed JSON.
inline ModelDocument document_from_json(const json& j, bool with_sweep = true)
{
    const detail::Node root(j, "");
    if (!j.is_object())
        detail::schema("", "expected a JSON object");
    const detail::Node version = root.at("schema_version");
    if (!version.raw().is_number_integer() || version.raw().get<long long>() != schema_version)
        detail::schema(version.path(), "unsupported schema version (expected " + std::to_string(schema_version) + ")");

    ModelDocument doc;
    doc.source = j;
    doc.kind = root.at("kind").string();
    if (auto n = root.find("name"))
        doc.name = n->string();
    if (doc.kind == "markov-dtmc" || doc.kind == "markov-ctmc")
        doc.payload = detail::read_markov(root, doc.kind == "markov-ctmc");
    else if (doc.kind == "station")
        doc.payload = detail::read_station(root);
    else if (doc.kind == "open-net" || doc.kind == "closed-net")
        doc.payload = detail::read_network(root, doc.kind == "open-net");
    else
        detail::schema("kind", "unknown kind \"" + doc.kind
                                   + "\" (expected markov-dtmc, markov-ctmc, station, open-net or closed-net)");

    if (with_sweep)
        if (auto s = root.find("sweep")) {
            if (doc.kind != "station" && doc.kind != "open-net" && doc.kind != "closed-net")
                detail::schema(s->path(), "sweeps apply to station and network models");
            doc.sweep = detail::read_sweep(*s);
            if (doc.sweep->mix && doc.kind != "closed-net")
                detail::schema(s->path() + ".population_mix", "population mixes apply to closed networks");
            if (doc.sweep->mix) {
                const auto& net = std::get<NetworkPayload>(doc.payload);
                if (doc.sweep->mix->fractions.size() + 1 != net.model.classes())
                    detail::schema(s->path() + ".population_mix.fractions",
                                   "expected one fraction per class except the last");
            }
        }
    return doc;
}

inline ModelDocument parse_model(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, column] = detail::line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        std::string msg = e.what();
        if (const auto pos = msg.find("parse error"); pos != std::string::npos)
            msg = msg.substr(pos);
        fail(errc::parse_error, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg);
    }
    return document_from_json(j);
}

inline ModelDocument load_model(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(errc::parse_error, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str());
}

} // namespace qnkit::cli
