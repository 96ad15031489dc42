#include "kgsum/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace kgsum {

namespace {

bool next_line(std::istream& in, std::string& line, long& lineno) {
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) return true;
    }
    return false;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

double parse_double(std::string_view text, long lineno, const char* what) {
    double value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        fail(ErrorCode::ParseError, std::string("bad ") + what + " '" + std::string(text) + "'",
             lineno);
    return value;
}

std::int64_t parse_int(std::string_view text, long lineno, const char* what) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        fail(ErrorCode::ParseError, std::string("bad ") + what + " '" + std::string(text) + "'",
             lineno);
    return value;
}

NodeId resolve(const NodeTable& nodes, std::string_view label, long lineno) {
    auto id = nodes.find(label);
    if (!id)
        fail(ErrorCode::UnknownNode, "node '" + std::string(label) + "' not declared", lineno);
    return *id;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "' for reading");
    return in;
}

}  // namespace

NodeTable load_kinds(std::istream& in) {
    NodeTable nodes;
    std::string line;
    long lineno = 0;
    while (next_line(in, line, lineno)) {
        if (lineno == 1 && line == "node_id\tkind") continue;
        auto fields = split(line, '\t');
        if (fields.size() != 2)
            fail(ErrorCode::ParseError, "expected node_id<TAB>kind", lineno);
        auto kind = parse_node_kind(fields[1]);
        if (!kind)
            fail(ErrorCode::ParseError, "unknown kind '" + std::string(fields[1]) + "'", lineno);
        try {
            nodes.add(std::string(fields[0]), *kind);
        } catch (const Error& e) {
            fail(e.code(), e.what(), lineno);
        }
    }
    return nodes;
}

NodeTable load_kinds(const std::string& path) {
    auto in = open_input(path);
    return load_kinds(in);
}

std::vector<RatingRecord> load_ratings(std::istream& in, const NodeTable& nodes) {
    std::vector<RatingRecord> out;
    std::string line;
    long lineno = 0;
    while (next_line(in, line, lineno)) {
        if (lineno == 1 && line == "user_id,item_id,rating,timestamp") continue;
        auto fields = split(line, ',');
        if (fields.size() != 4)
            fail(ErrorCode::ParseError, "expected user_id,item_id,rating,timestamp", lineno);
        RatingRecord r;
        r.user = resolve(nodes, fields[0], lineno);
        r.item = resolve(nodes, fields[1], lineno);
        r.rating = parse_double(fields[2], lineno, "rating");
        r.timestamp = parse_int(fields[3], lineno, "timestamp");
        out.push_back(r);
    }
    return out;
}

std::vector<RatingRecord> load_ratings(const std::string& path, const NodeTable& nodes) {
    auto in = open_input(path);
    return load_ratings(in, nodes);
}

TripleData load_triples(std::istream& in, const NodeTable& nodes) {
    TripleData data;
    std::unordered_map<std::string, std::int32_t> relation_index;
    std::string line;
    long lineno = 0;
    while (next_line(in, line, lineno)) {
        if (lineno == 1 && line == "head\trelation\ttail") continue;
        auto fields = split(line, '\t');
        if (fields.size() != 3)
            fail(ErrorCode::ParseError, "expected head<TAB>relation<TAB>tail", lineno);
        TripleRecord t;
        t.head = resolve(nodes, fields[0], lineno);
        t.tail = resolve(nodes, fields[2], lineno);
        auto [it, inserted] = relation_index.try_emplace(
            std::string(fields[1]), static_cast<std::int32_t>(data.relation_names.size()));
        if (inserted) data.relation_names.emplace_back(fields[1]);
        t.relation = it->second;
        data.triples.push_back(t);
    }
    return data;
}

TripleData load_triples(const std::string& path, const NodeTable& nodes) {
    auto in = open_input(path);
    return load_triples(in, nodes);
}

KnowledgeGraph load_graph(const std::string& ratings_path, const std::string& triples_path,
                          const std::string& kinds_path, const WeightParams& params,
                          const AttributeWeights& attr) {
    NodeTable nodes = load_kinds(kinds_path);
    auto ratings = load_ratings(ratings_path, nodes);
    auto triples = load_triples(triples_path, nodes);
    return KnowledgeGraph::build(std::move(nodes), ratings, triples.triples,
                                 std::move(triples.relation_names), params, attr);
}

std::vector<std::string> load_subjects(std::istream& in) {
    std::vector<std::string> out;
    std::string line;
    long lineno = 0;
    while (next_line(in, line, lineno)) {
        if (line[0] == '#') continue;
        out.push_back(line);
    }
    return out;
}

std::vector<std::string> load_subjects(const std::string& path) {
    auto in = open_input(path);
    return load_subjects(in);
}

std::vector<std::pair<std::string, std::string>> load_attributes(std::istream& in) {
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    long lineno = 0;
    while (next_line(in, line, lineno)) {
        if (line[0] == '#') continue;
        auto fields = split(line, '\t');
        if (fields.size() != 2)
            fail(ErrorCode::ParseError, "expected node_id<TAB>stratum", lineno);
        out.emplace_back(std::string(fields[0]), std::string(fields[1]));
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> load_attributes(const std::string& path) {
    auto in = open_input(path);
    return load_attributes(in);
}

void write_kinds(std::ostream& out, const NodeTable& nodes) {
    for (NodeId v = 0; v < nodes.size(); ++v)
        out << nodes.label(v) << '\t' << to_string(nodes.kind(v)) << '\n';
}

void write_ratings(std::ostream& out, const NodeTable& nodes,
                   const std::vector<RatingRecord>& ratings) {
    out << "user_id,item_id,rating,timestamp\n";
    std::ostringstream num;
    for (const RatingRecord& r : ratings) {
        num.str("");
        num << r.rating;
        out << nodes.label(r.user) << ',' << nodes.label(r.item) << ',' << num.str() << ','
            << r.timestamp << '\n';
    }
}

void write_triples(std::ostream& out, const NodeTable& nodes, const TripleData& data) {
    for (const TripleRecord& t : data.triples)
        out << nodes.label(t.head) << '\t'
            << (t.relation >= 0 ? data.relation_names[t.relation] : std::string("related")) << '\t'
            << nodes.label(t.tail) << '\n';
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::IoError, "cannot open '" + path + "' for writing");
    out << content;
    if (!out) fail(ErrorCode::IoError, "write failed for '" + path + "'");
}

}  // namespace kgsum
