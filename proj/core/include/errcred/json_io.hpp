#pragma once

// JSON encodings shared by reports, schedules and golden files.

#include "errcred/distr.hpp"
#include "errcred/semantics.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace errcred {

/// {"num": n, "den": d}; components that do not fit in 64 bits are strings.
nlohmann::json rat_to_json(const Rat& r);

/// Accepts {"num","den"}, an integer, or a string "a/b".
Rat rat_from_json(const nlohmann::json& j);

/// Sorted by printed key: [{"key": "...", "num": n, "den": d}, ...].
nlohmann::json values_to_json(const Distr<Val>& d);

nlohmann::json exec_to_json(const ExecResult& r);
nlohmann::json bound_to_json(const BoundResult& b);

nlohmann::json read_json_file(const std::string& path);

} // namespace errcred
