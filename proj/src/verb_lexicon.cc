// Copyright 2026 The moment-bench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <istream>
#include <string>

#include "moment_bench/stats.h"

namespace moment_bench {

const VerbLexicon& DefaultVerbLexicon() {
  static const VerbLexicon lexicon(std::set<std::string>{
      // Household actions.
      "awaken", "carry", "clean", "close", "cook", "drink", "dress", "eat",
      "fix", "grab", "hold", "lie", "open", "pick", "pour", "put", "sit",
      "sneeze", "snuggle", "stand", "sweep", "take", "throw", "tidy", "turn",
      "undress", "wash", "wipe", "work", "fold", "laugh", "smile", "look",
      "watch", "read", "write", "play", "talk", "walk", "run", "leave",
      "enter", "get", "go", "begin", "start", "use", "move", "hug", "kiss",
      // Sports and outdoor activities.
      "climb", "jump", "dance", "swim", "ride", "brush", "cut", "show",
      "speak", "kick", "hit", "shoot", "lift", "push", "pull",
      "paint", "sing", "stop", "continue", "finish", "demonstrate", "serve",
      "skate", "surf", "ski", "bounce", "spin", "wrap", "mix",
  });
  return lexicon;
}

VerbLexicon ReadVerbLexicon(std::istream& in) {
  std::set<std::string> lemmas;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.resize(hash);
    }
    for (auto& token : Tokenize(line)) lemmas.insert(std::move(token));
  }
  return VerbLexicon(std::move(lemmas));
}

}  // namespace moment_bench
