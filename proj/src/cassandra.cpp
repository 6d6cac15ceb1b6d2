#include "scout/cassandra.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "scout/errors.hpp"

namespace scout {

CassandraModel to_cassandra(const PomdpModel& model, const RewardSurrogate& surrogate) {
    CassandraModel out;
    out.discount = model.gamma();
    out.values = "reward";
    for (int s = 0; s < model.state_count(); ++s) out.states.push_back(model.state_name(s));
    for (int a = 0; a < model.action_count(); ++a) out.actions.push_back(model.action_name(a));
    out.observations = {to_string(Observation::O1), to_string(Observation::O2)};

    for (int a = 0; a < model.action_count(); ++a) {
        for (int s = 0; s < model.state_count(); ++s) {
            out.transitions[{a, s, model.next_state(s, a)}] = 1.0;
            const double p1 = model.obs_p1(s, a);  // s as successor
            if (p1 > 0.0) out.observation_probs[{a, s, 0}] = p1;
            if (p1 < 1.0) out.observation_probs[{a, s, 1}] = 1.0 - p1;
            const double r = surrogate_reward(model, s, a, surrogate);
            if (r != 0.0) out.rewards[{a, s}] = r;
        }
    }
    return out;
}

namespace {

std::string format_number(double v) {
    if (!std::isfinite(v)) throw FormatError("non-finite entry " + std::to_string(v));
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

struct LineScanner {
    std::istream& in;
    int line_no = 0;

    // Next nonempty line with comments stripped; false at end of input.
    bool next(std::string& out) {
        while (std::getline(in, out)) {
            ++line_no;
            if (const auto hash = out.find('#'); hash != std::string::npos) {
                out.erase(hash);
            }
            if (out.find_first_not_of(" \t\r") != std::string::npos) return true;
        }
        return false;
    }
};

std::vector<std::string> tokens_of(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

[[noreturn]] void fail(int line_no, const std::string& what) {
    throw FormatError("line " + std::to_string(line_no) + ": " + what);
}

double parse_number(const std::string& tok, int line_no) {
    double v = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size() || !std::isfinite(v)) {
        fail(line_no, "expected a number, got \"" + tok + "\"");
    }
    return v;
}

bool is_integer(const std::string& tok) {
    return !tok.empty() && tok.find_first_not_of("0123456789") == std::string::npos;
}

// Declaration value: either a count (auto-generated names) or a name list.
std::vector<std::string> parse_declaration(const std::vector<std::string>& toks,
                                           const char* prefix, int line_no) {
    if (toks.empty()) fail(line_no, "empty declaration");
    if (toks.size() == 1 && is_integer(toks[0])) {
        const int n = static_cast<int>(parse_number(toks[0], line_no));
        if (n < 1) fail(line_no, "declared count must be positive");
        std::vector<std::string> names;
        names.reserve(n);
        for (int i = 0; i < n; ++i) names.push_back(prefix + std::to_string(i));
        return names;
    }
    return toks;
}

// Resolves a name or numeric index; -1 encodes `*`.
int resolve(const std::string& tok, const std::vector<std::string>& names, const char* kind,
            int line_no) {
    if (tok == "*") return -1;
    if (is_integer(tok)) {
        const int idx = static_cast<int>(parse_number(tok, line_no));
        if (idx >= static_cast<int>(names.size())) {
            fail(line_no, std::string(kind) + " index " + tok + " out of range");
        }
        return idx;
    }
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == tok) return static_cast<int>(i);
    }
    fail(line_no, std::string("unknown ") + kind + " \"" + tok + "\"");
}

// Splits "T: a : s : s' p" into the colon-separated fields after the keyword.
std::vector<std::string> split_fields(const std::string& rest, int line_no) {
    std::vector<std::string> fields;
    std::size_t begin = 0;
    while (true) {
        const std::size_t colon = rest.find(':', begin);
        const std::string piece =
            colon == std::string::npos ? rest.substr(begin) : rest.substr(begin, colon - begin);
        fields.push_back(piece);
        if (colon == std::string::npos) break;
        begin = colon + 1;
    }
    for (auto& f : fields) {
        if (tokens_of(f).empty()) fail(line_no, "empty field");
    }
    return fields;
}

// A field that must hold exactly one token.
std::string single_token(const std::string& field, int line_no) {
    const auto toks = tokens_of(field);
    if (toks.size() != 1) fail(line_no, "expected one token, got \"" + field + "\"");
    return toks[0];
}

}  // namespace

void write_cassandra(const CassandraModel& model, std::ostream& out) {
    out << "discount: " << format_number(model.discount) << "\n";
    out << "values: " << model.values << "\n";
    out << "states:";
    for (const auto& s : model.states) out << " " << s;
    out << "\n";
    out << "actions:";
    for (const auto& a : model.actions) out << " " << a;
    out << "\n";
    out << "observations:";
    for (const auto& o : model.observations) out << " " << o;
    out << "\n\n";

    for (const auto& [key, p] : model.transitions) {
        const auto& [a, s, next] = key;
        out << "T: " << model.actions[a] << " : " << model.states[s] << " : "
            << model.states[next] << " " << format_number(p) << "\n";
    }
    out << "\n";
    for (const auto& [key, p] : model.observation_probs) {
        const auto& [a, next, o] = key;
        out << "O: " << model.actions[a] << " : " << model.states[next] << " : "
            << model.observations[o] << " " << format_number(p) << "\n";
    }
    out << "\n";
    for (const auto& [key, r] : model.rewards) {
        const auto& [a, s] = key;
        out << "R: " << model.actions[a] << " : " << model.states[s] << " : * : * "
            << format_number(r) << "\n";
    }
}

std::string write_cassandra_string(const CassandraModel& model) {
    std::ostringstream os;
    write_cassandra(model, os);
    return os.str();
}

CassandraModel parse_cassandra(std::istream& in) {
    CassandraModel model;
    LineScanner scanner{in};
    bool saw_discount = false, saw_values = false;
    std::string line;

    auto expand = [](int idx, int count, auto&& fn) {
        if (idx >= 0) {
            fn(idx);
        } else {
            for (int i = 0; i < count; ++i) fn(i);
        }
    };

    while (scanner.next(line)) {
        const auto colon = line.find(':');
        if (colon == std::string::npos) fail(scanner.line_no, "expected \"keyword:\"");
        const auto head_toks = tokens_of(line.substr(0, colon));
        if (head_toks.size() != 1) fail(scanner.line_no, "malformed keyword");
        const std::string& keyword = head_toks[0];
        const std::string rest = line.substr(colon + 1);
        const int line_no = scanner.line_no;

        if (keyword == "discount") {
            const auto toks = tokens_of(rest);
            if (toks.size() != 1) fail(line_no, "discount needs one number");
            model.discount = parse_number(toks[0], line_no);
            saw_discount = true;
        } else if (keyword == "values") {
            const auto toks = tokens_of(rest);
            if (toks.size() != 1 || (toks[0] != "reward" && toks[0] != "cost")) {
                fail(line_no, "values must be \"reward\" or \"cost\"");
            }
            model.values = toks[0];
            saw_values = true;
        } else if (keyword == "states") {
            model.states = parse_declaration(tokens_of(rest), "s", line_no);
        } else if (keyword == "actions") {
            model.actions = parse_declaration(tokens_of(rest), "a", line_no);
        } else if (keyword == "observations") {
            model.observations = parse_declaration(tokens_of(rest), "o", line_no);
        } else if (keyword == "start") {
            continue;  // initial-belief stanza, not represented
        } else if (keyword == "T") {
            if (model.states.empty() || model.actions.empty()) {
                fail(line_no, "T before states/actions declarations");
            }
            const auto fields = split_fields(rest, line_no);
            const int n = static_cast<int>(model.states.size());
            if (fields.size() == 1) {
                // "T: a" followed by a matrix keyword line.
                const int a = resolve(single_token(fields[0], line_no), model.actions, "action", line_no);
                std::string matrix;
                if (!scanner.next(matrix)) fail(line_no, "T matrix missing");
                const auto mtoks = tokens_of(matrix);
                if (mtoks.size() == 1 && mtoks[0] == "identity") {
                    expand(a, static_cast<int>(model.actions.size()), [&](int ai) {
                        for (int s = 0; s < n; ++s) model.transitions[{ai, s, s}] = 1.0;
                    });
                } else if (mtoks.size() == 1 && mtoks[0] == "uniform") {
                    expand(a, static_cast<int>(model.actions.size()), [&](int ai) {
                        for (int s = 0; s < n; ++s) {
                            for (int next = 0; next < n; ++next) {
                                model.transitions[{ai, s, next}] = 1.0 / n;
                            }
                        }
                    });
                } else {
                    fail(scanner.line_no, "expected \"identity\" or \"uniform\"");
                }
            } else if (fields.size() == 3) {
                const auto last = tokens_of(fields[2]);
                if (last.size() != 2) fail(line_no, "expected \"T: a : s : s' p\"");
                const int a = resolve(single_token(fields[0], line_no), model.actions, "action", line_no);
                const int s = resolve(single_token(fields[1], line_no), model.states, "state", line_no);
                const int next = resolve(last[0], model.states, "state", line_no);
                const double p = parse_number(last[1], line_no);
                expand(a, static_cast<int>(model.actions.size()), [&](int ai) {
                    expand(s, n, [&](int si) {
                        expand(next, n, [&](int ni) {
                            if (p != 0.0) model.transitions[{ai, si, ni}] = p;
                        });
                    });
                });
            } else {
                fail(line_no, "unsupported T form");
            }
        } else if (keyword == "O") {
            if (model.states.empty() || model.actions.empty() || model.observations.empty()) {
                fail(line_no, "O before declarations");
            }
            const auto fields = split_fields(rest, line_no);
            const int n = static_cast<int>(model.states.size());
            const int nobs = static_cast<int>(model.observations.size());
            if (fields.size() == 1) {
                const int a = resolve(single_token(fields[0], line_no), model.actions, "action", line_no);
                std::string matrix;
                if (!scanner.next(matrix)) fail(line_no, "O matrix missing");
                const auto mtoks = tokens_of(matrix);
                if (mtoks.size() == 1 && mtoks[0] == "uniform") {
                    expand(a, static_cast<int>(model.actions.size()), [&](int ai) {
                        for (int next = 0; next < n; ++next) {
                            for (int o = 0; o < nobs; ++o) {
                                model.observation_probs[{ai, next, o}] = 1.0 / nobs;
                            }
                        }
                    });
                } else {
                    fail(scanner.line_no, "expected \"uniform\"");
                }
            } else if (fields.size() == 3) {
                const auto last = tokens_of(fields[2]);
                if (last.size() != 2) fail(line_no, "expected \"O: a : s' : o p\"");
                const int a = resolve(single_token(fields[0], line_no), model.actions, "action", line_no);
                const int next = resolve(single_token(fields[1], line_no), model.states, "state", line_no);
                const int o = resolve(last[0], model.observations, "observation", line_no);
                const double p = parse_number(last[1], line_no);
                expand(a, static_cast<int>(model.actions.size()), [&](int ai) {
                    expand(next, n, [&](int ni) {
                        expand(o, nobs, [&](int oi) {
                            if (p != 0.0) model.observation_probs[{ai, ni, oi}] = p;
                        });
                    });
                });
            } else {
                fail(line_no, "unsupported O form");
            }
        } else if (keyword == "R") {
            if (model.states.empty() || model.actions.empty()) {
                fail(line_no, "R before declarations");
            }
            const auto fields = split_fields(rest, line_no);
            if (fields.size() != 4) fail(line_no, "expected \"R: a : s : * : * v\"");
            const auto last = tokens_of(fields[3]);
            if (last.size() != 2 || last[0] != "*" || single_token(fields[2], line_no) != "*") {
                fail(line_no, "only the \"R: a : s : * : * v\" shape is supported");
            }
            const int a = resolve(single_token(fields[0], line_no), model.actions, "action", line_no);
            const int s = resolve(single_token(fields[1], line_no), model.states, "state", line_no);
            const double v = parse_number(last[1], line_no);
            expand(a, static_cast<int>(model.actions.size()), [&](int ai) {
                expand(s, static_cast<int>(model.states.size()), [&](int si) {
                    if (v != 0.0) model.rewards[{ai, si}] = v;
                });
            });
        } else {
            fail(line_no, "unknown keyword \"" + keyword + "\"");
        }
    }

    if (!saw_discount) throw FormatError("missing discount declaration");
    if (!saw_values) throw FormatError("missing values declaration");
    if (model.states.empty()) throw FormatError("missing states declaration");
    if (model.actions.empty()) throw FormatError("missing actions declaration");
    if (model.observations.empty()) throw FormatError("missing observations declaration");
    return model;
}

CassandraModel parse_cassandra_string(const std::string& text) {
    std::istringstream is(text);
    return parse_cassandra(is);
}

}  // namespace scout
