// SPDX-License-Identifier: Apache-2.0
//
// JSON / CSV payloads shared by the CLI: verdicts, Zeno traces, grids.

#pragma once

#include "mandel/certifier.hpp"
#include "mandel/render.hpp"
#include "mandel/zeno.hpp"

#include "json.hpp"

#include <string>

namespace mandel::io {

using Json = nlohmann::ordered_json;

Json point_json(const ComplexRational& c);
ComplexRational point_from_json(const Json& j);

Json certificate_json(const Verdict& v);

/// {"c":..., "verdict":"out|in|unknown", "certificate":{...}, "budget":n, "precision":p}
Json verdict_json(const Json& c, const Verdict& v);
Verdict verdict_from_json(const Json& j);

Json snapshot_json(const zeno::Snapshot& s);
std::string trace_jsonl(const zeno::ZenoTrace& trace);
Json trace_summary_json(const zeno::ZenoTrace& trace);

Json stage_json(const zeno::StageRecord& s);

Json viewport_json(const render::Viewport& v);
/// Run metadata, verdict counts and area bounds.
Json grid_summary_json(const render::PixelGrid& g);
/// Summary plus per-cell verdict letters (o/i/u per row) and escape steps.
Json grid_json(const render::PixelGrid& g);
std::string grid_summary_csv(const render::PixelGrid& g);

}  // namespace mandel::io
