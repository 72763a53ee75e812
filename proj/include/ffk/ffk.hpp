#pragma once

#include "ffk/bounds.hpp"
#include "ffk/duality.hpp"
#include "ffk/error.hpp"
#include "ffk/fusion_frame.hpp"
#include "ffk/io.hpp"
#include "ffk/numerics.hpp"
#include "ffk/sampling.hpp"
#include "ffk/systems.hpp"
#include "ffk/vector_frames.hpp"
