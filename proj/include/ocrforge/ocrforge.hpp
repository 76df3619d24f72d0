#pragma once

// Umbrella header for the full toolkit.

#include "ocrforge/chain.hpp"          // reasoning-chain grammar + format reward
#include "ocrforge/chat_client.hpp"    // chat-completions client (http + canned)
#include "ocrforge/errors.hpp"
#include "ocrforge/eval.hpp"           // batch evaluation reports
#include "ocrforge/forge.hpp"          // reasoning-data construction pipeline
#include "ocrforge/formula_metrics.hpp"
#include "ocrforge/jsonl.hpp"
#include "ocrforge/latex.hpp"
#include "ocrforge/prompt_template.hpp"
#include "ocrforge/records.hpp"
#include "ocrforge/reward.hpp"         // format + accuracy reward composition
#include "ocrforge/reward_service.hpp" // streaming scorer + HTTP endpoint
#include "ocrforge/split.hpp"          // leakage-isolated dataset splitting
#include "ocrforge/table_tree.hpp"
#include "ocrforge/task.hpp"
#include "ocrforge/teds.hpp"
#include "ocrforge/text_metrics.hpp"
#include "ocrforge/tool_adapter.hpp"
#include "ocrforge/unicode.hpp"
#include "ocrforge/version.hpp"
