#pragma once

#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "partree/errors.hpp"
#include "partree/operads.hpp"

// Loading user-supplied operads from a JSON table file. The format (see the
// README) lists the operation sets per arity, the symmetric actions as index
// arrays per permutation, and the partial compositions as tuples. The loader
// re-validates all operad axioms before handing the operad out.

namespace partree {

class TableOperad final : public FiniteOperad {
public:
    TableOperad(std::string name, int max_arity, std::vector<std::vector<std::string>> names,
                std::vector<std::map<std::vector<int>, std::vector<int>>> actions,
                std::map<std::tuple<int, int, int, int, int>, int> compositions)
        : name_(std::move(name)),
          max_(max_arity),
          names_(std::move(names)),
          actions_(std::move(actions)),
          comps_(std::move(compositions)) {}

    std::string name() const override { return name_; }
    int max_arity() const override { return max_; }
    int arity_size(int arity) const override {
        return static_cast<int>(names_[arity].size());
    }
    std::string op_name(int arity, int op) const override { return names_[arity][op]; }

    int act_impl(int arity, const std::vector<int>& perm, int op) const override {
        bool identity = true;
        for (int i = 0; i < arity && identity; ++i) identity = (perm[i] == i);
        if (identity) return op;
        auto it = actions_[arity].find(perm);
        if (it == actions_[arity].end())
            fail("IncompleteTable", "operad '" + name_ + "' lacks an action entry in arity " +
                                        std::to_string(arity));
        return it->second[op];
    }

    int compose_impl(int arity, int op, int pos, int sub_arity, int sub_op) const override {
        auto it = comps_.find({arity, op, pos, sub_arity, sub_op});
        if (it == comps_.end())
            fail("IncompleteTable",
                 "operad '" + name_ + "' lacks a composition entry for arity " +
                     std::to_string(arity) + " at position " + std::to_string(pos));
        return it->second;
    }

private:
    std::string name_;
    int max_;
    std::vector<std::vector<std::string>> names_;                       // per arity
    std::vector<std::map<std::vector<int>, std::vector<int>>> actions_;  // per arity
    std::map<std::tuple<int, int, int, int, int>, int> comps_;
};

inline std::unique_ptr<FiniteOperad> load_operad(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("BadOperadFile", "cannot open '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        fail("BadOperadFile", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.contains("max_arity") || !doc.contains("operations"))
        fail("BadOperadFile", "missing 'max_arity' or 'operations'");
    const std::string name = doc.value("name", std::string("custom"));
    const int max_arity = doc["max_arity"].get<int>();
    if (max_arity < 2 || max_arity > 8) fail("BadOperadFile", "max_arity must be within 2..8");

    std::vector<std::vector<std::string>> names(max_arity + 1);
    for (auto& [key, value] : doc["operations"].items()) {
        const int arity = std::stoi(key);
        if (arity < 2 || arity > max_arity)
            fail("BadOperadFile", "operation arity " + key + " out of range");
        names[arity] = value.get<std::vector<std::string>>();
    }

    std::vector<std::map<std::vector<int>, std::vector<int>>> actions(max_arity + 1);
    for (const auto& entry : doc.value("actions", nlohmann::json::array())) {
        const int arity = entry.at("arity").get<int>();
        if (arity < 2 || arity > max_arity) fail("BadOperadFile", "action arity out of range");
        auto perm = entry.at("perm").get<std::vector<int>>();
        auto images = entry.at("images").get<std::vector<int>>();
        if (static_cast<int>(perm.size()) != arity ||
            images.size() != names[arity].size())
            fail("BadOperadFile", "action entry has wrong sizes");
        actions[arity][perm] = images;
    }

    std::map<std::tuple<int, int, int, int, int>, int> comps;
    for (const auto& entry : doc.value("compositions", nlohmann::json::array())) {
        const int arity = entry.at("arity").get<int>();
        const int op = entry.at("op").get<int>();
        const int pos = entry.at("at").get<int>();
        const int sub_arity = entry.at("sub_arity").get<int>();
        const int sub_op = entry.at("sub_op").get<int>();
        const int result = entry.at("result").get<int>();
        comps[{arity, op, pos, sub_arity, sub_op}] = result;
    }

    auto operad = std::make_unique<TableOperad>(name, max_arity, std::move(names),
                                                std::move(actions), std::move(comps));

    // completeness: every in-bound composition and every non-identity
    // permutation must be resolvable
    for (int k = 2; k <= max_arity; ++k)
        for (int m = 2; m <= max_arity; ++m) {
            if (k + m - 1 > max_arity) continue;
            for (int a = 0; a < operad->size(k); ++a)
                for (int b = 0; b < operad->size(m); ++b)
                    for (int j = 0; j < k; ++j) (void)operad->compose(k, a, j, m, b);
        }
    for (int k = 2; k <= max_arity; ++k) {
        if (operad->size(k) == 0) continue;
        for (const auto& perm : detail::all_permutations(k))
            for (int a = 0; a < operad->size(k); ++a) {
                const int img = operad->act(k, perm, a);
                if (img < 0 || img >= operad->size(k))
                    fail("BadOperadFile", "action image out of range");
            }
    }
    validate_operad(*operad, std::min(max_arity, 4));
    return operad;
}

// comm | assoc | file:PATH
inline std::unique_ptr<FiniteOperad> make_operad(const std::string& spec, int max_arity = 0) {
    if (spec == "comm") return make_comm(max_arity > 0 ? max_arity : 8);
    if (spec == "assoc") return make_assoc(max_arity > 0 ? max_arity : 6);
    if (spec.rfind("file:", 0) == 0) return load_operad(spec.substr(5));
    fail("BadOperadFile", "unknown operad '" + spec + "' (use comm, assoc, or file:PATH)");
}

}  // namespace partree
