#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "scout/pomdp.hpp"

namespace scout {

/// In-memory image of a Cassandra-format `.pomdp` document: name lists plus
/// sparse tables keyed by index tuples. Zero entries are omitted.
struct CassandraModel {
    double discount = 0.95;
    std::string values = "reward";  // "reward" or "cost"
    std::vector<std::string> states;
    std::vector<std::string> actions;
    std::vector<std::string> observations;
    std::map<std::tuple<int, int, int>, double> transitions;        // (a, s, s') -> p
    std::map<std::tuple<int, int, int>, double> observation_probs;  // (a, s', o) -> p
    std::map<std::pair<int, int>, double> rewards;                  // (a, s) -> value

    bool operator==(const CassandraModel&) const = default;
};

/// Flattens a model for export, substituting the linear reward surrogate for
/// the belief-dependent objective.
CassandraModel to_cassandra(const PomdpModel& model, const RewardSurrogate& surrogate = {});

/// Canonical rendering: fixed stanza order, entries in map order, shortest
/// round-trip number formatting. Identical models produce identical bytes.
/// Throws FormatError on non-finite entries.
void write_cassandra(const CassandraModel& model, std::ostream& out);
std::string write_cassandra_string(const CassandraModel& model);

/// Reads the subset of the format that write_cassandra emits, plus common
/// conveniences: `#` comments, count-form declarations (auto-named s0/a0/o0),
/// numeric indices, `*` wildcards, and `identity`/`uniform` matrix keywords.
/// `start` stanzas are skipped. Rewards must use the `R: a : s : * : *` shape.
/// Throws FormatError with a line number on anything unsupported.
CassandraModel parse_cassandra(std::istream& in);
CassandraModel parse_cassandra_string(const std::string& text);

}  // namespace scout
