#pragma once

#include "normcount/engine.hpp"
#include "normcount/fields.hpp"
#include "normcount/form_spec.hpp"
#include "normcount/sieve.hpp"

#include <optional>
#include <string>

namespace normcount {

// Plain-text configuration with [field], [form] and [engine] sections of
// key = value lines. Every section is optional in a single file.
//
//   [field]  q, H (e.g. "[1, 8]"), pid, negative_norms
//   [form]   a, b, c
//   [engine] B, strategy, threads, memory_budget_mib, beta, eps0, eta, w0_min
struct Config {
    std::optional<FieldSpec> field;
    std::optional<FormSpec> form;
    NegativeNorms negative_norms = NegativeNorms::automatic;
    std::optional<i64> B;
    SweepConfig sweep{};
    PipelineOptions pipeline{};
};

Config parse_config(const std::string& text);
Config load_config(const std::string& path);
// Sections present in `other` override those in `base`.
Config merge_config(Config base, const Config& other);

std::string field_to_string(const FieldSpec& spec);

} // namespace normcount
