#pragma once

// Everything in one include.

#include "alphabet.hpp"
#include "assistant.hpp"
#include "automaton_io.hpp"
#include "closure.hpp"
#include "errors.hpp"
#include "learners.hpp"
#include "normal_form.hpp"
#include "random.hpp"
#include "syntax.hpp"
#include "teacher.hpp"
#include "text.hpp"
#include "tree_automata.hpp"
#include "word_automata.hpp"
