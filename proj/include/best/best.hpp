#pragma once

// Umbrella header: the clue-extraction / prompt-synthesis / candidate-judging
// pipeline, the scene-graph tuple metric, and the VQA evaluation harness.

#include "best/errors.hpp"
#include "best/hash.hpp"
#include "best/text.hpp"
#include "best/embedding.hpp"
#include "best/geometry.hpp"
#include "best/image.hpp"
#include "best/backend.hpp"
#include "best/mock_backend.hpp"
#include "best/http_backend.hpp"
#include "best/gateway.hpp"
#include "best/vocabulary.hpp"
#include "best/nms.hpp"
#include "best/selection.hpp"
#include "best/visual_clues.hpp"
#include "best/clue_extractor.hpp"
#include "best/prompt.hpp"
#include "best/candidate.hpp"
#include "best/conllu.hpp"
#include "best/scene_graph.hpp"
#include "best/graph_rules.hpp"
#include "best/lexicon.hpp"
#include "best/spipe.hpp"
#include "best/naive_graph.hpp"
#include "best/vqa.hpp"
#include "best/config.hpp"
#include "best/runner.hpp"
