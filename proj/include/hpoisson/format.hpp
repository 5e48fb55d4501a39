#pragma once

#include "format/document.hpp"
#include "format/lexer.hpp"
#include "format/parser.hpp"
#include "format/render.hpp"
#include "format/runner.hpp"
