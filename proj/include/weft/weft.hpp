#pragma once

// Umbrella include for the whole library.

#include "weft/baking.hpp"
#include "weft/chat.hpp"
#include "weft/designer.hpp"
#include "weft/draft.hpp"
#include "weft/image.hpp"
#include "weft/irregularity.hpp"
#include "weft/noise.hpp"
#include "weft/params.hpp"
#include "weft/render.hpp"
#include "weft/scene.hpp"
#include "weft/vec.hpp"
#include "weft/yarn.hpp"
