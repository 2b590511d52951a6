//! Embedded familiar-word subsets. These cover the most frequent entries of
//! the Dale-Chall and Spache lists and are enough for fixtures and rough
//! scores; supply the full lists with [`super::WordLists::from_files`].

pub(super) const DALE_CHALL_SUBSET: &[&str] = &[
    "a", "able", "about", "above", "across", "act", "add", "afraid", "after", "afternoon",
    "again", "against", "ago", "agree", "air", "all", "almost", "alone", "along", "already",
    "also", "always", "am", "among", "an", "and", "angry", "animal", "another", "answer",
    "any", "anyone", "anything", "apple", "are", "arm", "around", "as", "ask", "at",
    "away", "baby", "back", "bad", "bag", "ball", "bank", "be", "bear", "beautiful",
    "because", "bed", "been", "before", "began", "begin", "behind", "being", "believe", "bell",
    "below", "best", "better", "between", "big", "bird", "black", "blue", "boat", "body",
    "book", "both", "box", "boy", "bread", "break", "bring", "brother", "brown", "build",
    "busy", "but", "buy", "by", "call", "came", "can", "car", "care", "carry",
    "cat", "catch", "chair", "change", "child", "children", "city", "class", "clean", "clear",
    "close", "cold", "come", "could", "country", "cow", "cry", "cut", "dark", "day",
    "dear", "did", "different", "do", "does", "dog", "done", "door", "down", "draw",
    "drink", "drive", "dry", "each", "early", "earth", "easy", "eat", "egg", "end",
    "enough", "even", "evening", "ever", "every", "eye", "face", "fall", "family", "far",
    "farm", "fast", "father", "feel", "feet", "few", "field", "find", "fine", "fire",
    "first", "fish", "five", "floor", "flower", "fly", "follow", "food", "for", "found",
    "four", "friend", "from", "front", "full", "fun", "game", "garden", "gave", "get",
    "girl", "give", "glad", "go", "going", "gold", "good", "got", "grass", "great",
    "green", "ground", "grow", "had", "hand", "happy", "hard", "has", "hat", "have",
    "he", "head", "hear", "heard", "help", "her", "here", "high", "hill", "him",
    "his", "hold", "home", "horse", "hot", "house", "how", "hurt", "i", "if",
    "in", "into", "is", "it", "its", "job", "jump", "just", "keep", "kind",
    "knew", "know", "lady", "land", "large", "last", "late", "laugh", "learn", "leave",
    "left", "leg", "let", "letter", "light", "like", "line", "little", "live", "long",
    "look", "lot", "love", "low", "made", "make", "man", "many", "may", "me",
    "mean", "men", "might", "milk", "mind", "money", "more", "morning", "most", "mother",
    "much", "must", "my", "name", "near", "need", "never", "new", "next", "nice",
    "night", "no", "not", "nothing", "now", "of", "off", "often", "old", "on",
    "once", "one", "only", "open", "or", "other", "our", "out", "over", "own",
    "page", "paper", "part", "people", "place", "play", "please", "point", "poor", "put",
    "question", "quick", "rain", "ran", "read", "ready", "real", "red", "rest", "ride",
    "right", "river", "road", "room", "run", "said", "same", "sat", "saw", "say",
    "school", "sea", "see", "seem", "seen", "sell", "send", "set", "she", "ship",
    "short", "should", "show", "side", "sing", "sister", "sit", "sleep", "slow", "small",
    "so", "some", "something", "song", "soon", "sound", "start", "stay", "still", "stop",
    "story", "street", "strong", "such", "sun", "sure", "table", "take", "talk", "tell",
    "ten", "than", "thank", "that", "the", "their", "them", "then", "there", "these",
    "they", "thing", "think", "this", "those", "thought", "three", "through", "time", "to",
    "today", "together", "told", "too", "took", "town", "tree", "true", "try", "turn",
    "two", "under", "until", "up", "upon", "us", "use", "very", "wait", "walk",
    "want", "warm", "was", "watch", "water", "way", "we", "well", "went", "were",
    "what", "when", "where", "which", "while", "white", "who", "why", "will", "wind",
    "window", "with", "woman", "word", "work", "world", "would", "write", "year", "yes",
    "yet", "you", "young", "your",
];

pub(super) const SPACHE_SUBSET: &[&str] = &[
    "a", "about", "after", "again", "all", "am", "an", "and", "animal", "any",
    "are", "as", "ask", "at", "away", "baby", "back", "ball", "be", "bed",
    "big", "bird", "black", "blue", "book", "boy", "but", "by", "call", "came",
    "can", "car", "cat", "come", "could", "day", "did", "do", "dog", "down",
    "eat", "fast", "find", "fish", "for", "from", "fun", "funny", "get", "girl",
    "give", "go", "good", "green", "had", "has", "have", "he", "help", "her",
    "here", "him", "his", "home", "house", "how", "i", "if", "in", "into",
    "is", "it", "jump", "just", "know", "like", "little", "look", "made", "make",
    "man", "may", "me", "mother", "my", "no", "not", "now", "of", "old",
    "on", "one", "or", "our", "out", "over", "play", "put", "ran", "red",
    "ride", "run", "said", "sat", "saw", "say", "see", "she", "sit", "so",
    "some", "stop", "take", "tell", "that", "the", "them", "then", "there", "they",
    "this", "three", "to", "too", "tree", "two", "up", "us", "want", "was",
    "we", "went", "what", "when", "where", "who", "will", "with", "work", "yellow",
    "yes", "you",
];
