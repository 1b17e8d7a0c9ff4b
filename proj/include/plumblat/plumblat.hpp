#pragma once

#include "plumblat/brute.hpp"
#include "plumblat/corpus.hpp"
#include "plumblat/generic.hpp"
#include "plumblat/graph.hpp"
#include "plumblat/io.hpp"
#include "plumblat/lattice.hpp"
#include "plumblat/laufer.hpp"
#include "plumblat/minimize.hpp"
#include "plumblat/oracle.hpp"
#include "plumblat/relative.hpp"
#include "plumblat/types.hpp"
