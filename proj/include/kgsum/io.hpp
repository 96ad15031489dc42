#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "kgsum/graph.hpp"

namespace kgsum {

// Plain-text loaders. All formats are line-oriented UTF-8 with LF newlines
// (a trailing CR is tolerated); node ids are simple tokens without commas or
// tabs. Each loader has a stream overload for tests and a path overload that
// throws IoError when the file cannot be opened. Malformed lines throw
// ParseError with the 1-based line number.

// kinds TSV: node_id<TAB>kind, kind in {user,item,external}. Declares every
// node; dense ids are assigned in file order. An optional literal
// "node_id<TAB>kind" header is skipped.
NodeTable load_kinds(std::istream& in);
NodeTable load_kinds(const std::string& path);

// ratings CSV: user_id,item_id,rating,timestamp. Optional literal header.
std::vector<RatingRecord> load_ratings(std::istream& in, const NodeTable& nodes);
std::vector<RatingRecord> load_ratings(const std::string& path, const NodeTable& nodes);

struct TripleData {
    std::vector<TripleRecord> triples;
    std::vector<std::string> relation_names;  // in first-seen order
};

// triples TSV: head<TAB>relation<TAB>tail. Optional literal header.
TripleData load_triples(std::istream& in, const NodeTable& nodes);
TripleData load_triples(const std::string& path, const NodeTable& nodes);

// Convenience: load all three files and assemble the graph.
KnowledgeGraph load_graph(const std::string& ratings_path, const std::string& triples_path,
                          const std::string& kinds_path, const WeightParams& params,
                          const AttributeWeights& attr = {});

// Newline-separated node ids (subject lists). Blank lines and lines starting
// with '#' are skipped.
std::vector<std::string> load_subjects(std::istream& in);
std::vector<std::string> load_subjects(const std::string& path);

// attributes TSV: node_id<TAB>stratum (e.g. demographic strata for users,
// or group labels such as popular/unpopular for items).
std::vector<std::pair<std::string, std::string>> load_attributes(std::istream& in);
std::vector<std::pair<std::string, std::string>> load_attributes(const std::string& path);

void write_kinds(std::ostream& out, const NodeTable& nodes);
void write_ratings(std::ostream& out, const NodeTable& nodes,
                   const std::vector<RatingRecord>& ratings);
void write_triples(std::ostream& out, const NodeTable& nodes, const TripleData& data);

// Opens for writing, throws IoError on failure.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace kgsum
