// Canonical JSON form of a SplittingSet.
//
//   {"schema": 1, "kind": "splitting_set",
//    "lambda": ["3","5"], "alpha": ["3","4"], "theta": ["9","10"], "depth": 20,
//    "placements": [{"host": [["0","1"],["1","1"]],
//                    "kept": {"alpha": [..], "base": [[..],[..]]},
//                    "removed": {"alpha": [..], "base": [[..],[..]]}}, ...]}
//
// Rationals are [numerator, denominator] pairs of decimal strings in lowest
// terms. Keys are emitted sorted, so dump(parse(dump(A))) == dump(A).
#pragma once

#include "pathsub/splitting_set.hpp"

#include <json.hpp>

#include <string>

namespace pathsub {

inline nlohmann::json rational_to_json(const ExactScalar& q)
{
    return nlohmann::json::array({q.get_num().get_str(10), q.get_den().get_str(10)});
}

inline ExactScalar rational_from_json(const nlohmann::json& j, const std::string& field)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string())
        throw std::invalid_argument(field + ": expected [numerator, denominator] strings");
    mpz_class num;
    mpz_class den;
    if (num.set_str(j[0].get<std::string>(), 10) != 0 || den.set_str(j[1].get<std::string>(), 10) != 0 || den <= 0)
        throw std::invalid_argument(field + ": malformed rational");
    ExactScalar q(num, den);
    q.canonicalize();
    if (q.get_num() != num || q.get_den() != den) throw std::invalid_argument(field + ": rational not in lowest terms");
    return q;
}

inline nlohmann::json interval_to_json(const Interval& I)
{
    return nlohmann::json::array({rational_to_json(I.lo()), rational_to_json(I.hi())});
}

inline Interval interval_from_json(const nlohmann::json& j, const std::string& field)
{
    if (!j.is_array() || j.size() != 2) throw std::invalid_argument(field + ": expected [lo, hi]");
    return Interval(rational_from_json(j[0], field + "[0]"), rational_from_json(j[1], field + "[1]"));
}

inline nlohmann::json cantor_to_json(const FatCantorSet& F)
{
    return {{"base", interval_to_json(F.base())}, {"alpha", rational_to_json(F.alpha())}};
}

inline FatCantorSet cantor_from_json(const nlohmann::json& j, const std::string& field)
{
    if (!j.is_object()) throw std::invalid_argument(field + ": expected object");
    return FatCantorSet(interval_from_json(j.at("base"), field + ".base"),
                        rational_from_json(j.at("alpha"), field + ".alpha"));
}

inline nlohmann::json to_json(const SplittingSet& A)
{
    nlohmann::json placements = nlohmann::json::array();
    for (const auto& p : A.placements())
        placements.push_back({{"host", interval_to_json(p.host)},
                              {"kept", cantor_to_json(p.kept)},
                              {"removed", cantor_to_json(p.removed)}});
    return {{"schema", 1},
            {"kind", "splitting_set"},
            {"lambda", rational_to_json(A.lambda())},
            {"alpha", rational_to_json(A.alpha())},
            {"theta", rational_to_json(A.theta())},
            {"depth", A.depth()},
            {"placements", std::move(placements)}};
}

inline SplittingSet splitting_set_from_json(const nlohmann::json& j)
{
    try {
        if (j.at("schema") != 1) throw std::invalid_argument("schema: unsupported version");
        if (j.at("kind") != "splitting_set") throw std::invalid_argument("kind: expected \"splitting_set\"");
        std::vector<Placement> placements;
        const auto& arr = j.at("placements");
        if (!arr.is_array()) throw std::invalid_argument("placements: expected array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string field = "placements[" + std::to_string(i) + "]";
            placements.push_back(Placement{interval_from_json(arr[i].at("host"), field + ".host"),
                                           cantor_from_json(arr[i].at("kept"), field + ".kept"),
                                           cantor_from_json(arr[i].at("removed"), field + ".removed")});
        }
        return SplittingSet(rational_from_json(j.at("lambda"), "lambda"), rational_from_json(j.at("alpha"), "alpha"),
                            rational_from_json(j.at("theta"), "theta"), j.at("depth").get<unsigned>(),
                            std::move(placements));
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("splitting set JSON: ") + e.what());
    }
}

inline std::string dump_splitting_set(const SplittingSet& A) { return to_json(A).dump(); }

inline SplittingSet parse_splitting_set(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("splitting set JSON: ") + e.what());
    }
    return splitting_set_from_json(j);
}

} // namespace pathsub
