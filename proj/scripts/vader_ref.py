"""Pure-Python port of the public VADER sentiment algorithm (Hutto & Gilbert 2014,
https://github.com/cjhutto/vaderSentiment, v3.3.2 semantics).

Used offline to generate the frozen golden fixture in tests/data/. Emits
unrounded scores so the fixture carries full precision. ASCII text only.
"""

import math
import string

B_INCR = 0.293
B_DECR = -0.293
C_INCR = 0.733
N_SCALAR = -0.74

NEGATE = {
    "aint", "arent", "cannot", "cant", "couldnt", "darent", "didnt", "doesnt",
    "ain't", "aren't", "can't", "couldn't", "daren't", "didn't", "doesn't",
    "dont", "hadnt", "hasnt", "havent", "isnt", "mightnt", "mustnt", "neither",
    "don't", "hadn't", "hasn't", "haven't", "isn't", "mightn't", "mustn't",
    "neednt", "needn't", "never", "none", "nope", "nor", "not", "nothing",
    "nowhere", "oughtnt", "shant", "shouldnt", "uhuh", "wasnt", "werent",
    "oughtn't", "shan't", "shouldn't", "uh-uh", "wasn't", "weren't", "without",
    "wont", "wouldnt", "won't", "wouldn't", "rarely", "seldom", "despite",
}

BOOSTER_DICT = {
    "absolutely": B_INCR, "amazingly": B_INCR, "awfully": B_INCR,
    "completely": B_INCR, "considerable": B_INCR, "considerably": B_INCR,
    "decidedly": B_INCR, "deeply": B_INCR, "effing": B_INCR,
    "enormous": B_INCR, "enormously": B_INCR, "entirely": B_INCR,
    "especially": B_INCR, "exceptional": B_INCR, "exceptionally": B_INCR,
    "extreme": B_INCR, "extremely": B_INCR, "fabulously": B_INCR,
    "flipping": B_INCR, "flippin": B_INCR, "frackin": B_INCR,
    "fracking": B_INCR, "fricking": B_INCR, "frickin": B_INCR,
    "frigging": B_INCR, "friggin": B_INCR, "fully": B_INCR,
    "fuckin": B_INCR, "fucking": B_INCR, "fuggin": B_INCR,
    "fugging": B_INCR, "greatly": B_INCR, "hella": B_INCR, "highly": B_INCR,
    "hugely": B_INCR, "incredible": B_INCR, "incredibly": B_INCR,
    "intensely": B_INCR, "major": B_INCR, "majorly": B_INCR, "more": B_INCR,
    "most": B_INCR, "particularly": B_INCR, "purely": B_INCR, "quite": B_INCR,
    "really": B_INCR, "remarkably": B_INCR, "so": B_INCR,
    "substantially": B_INCR, "thoroughly": B_INCR, "total": B_INCR,
    "totally": B_INCR, "tremendous": B_INCR, "tremendously": B_INCR,
    "uber": B_INCR, "unbelievably": B_INCR, "unusually": B_INCR,
    "utter": B_INCR, "utterly": B_INCR, "very": B_INCR,
    "almost": B_DECR, "barely": B_DECR, "hardly": B_DECR,
    "just enough": B_DECR, "kind of": B_DECR, "kinda": B_DECR,
    "kindof": B_DECR, "kind-of": B_DECR, "less": B_DECR, "little": B_DECR,
    "marginal": B_DECR, "marginally": B_DECR, "occasional": B_DECR,
    "occasionally": B_DECR, "partly": B_DECR, "scarce": B_DECR,
    "scarcely": B_DECR, "slight": B_DECR, "slightly": B_DECR,
    "somewhat": B_DECR, "sort of": B_DECR, "sorta": B_DECR,
    "sortof": B_DECR, "sort-of": B_DECR,
}

SPECIAL_CASES = {
    "the shit": 3.0, "the bomb": 3.0, "bad ass": 1.5, "badass": 1.5,
    "bus stop": 0.0, "yeah right": -2.0, "kiss of death": -1.5,
    "to die for": 3.0, "beating heart": 3.1, "broken heart": -2.9,
}


def negated(input_words, include_nt=True):
    input_words = [str(w).lower() for w in input_words]
    for word in NEGATE:
        if word in input_words:
            return True
    if include_nt:
        for word in input_words:
            if "n't" in word:
                return True
    return False


def normalize(score, alpha=15):
    norm_score = score / math.sqrt((score * score) + alpha)
    if norm_score < -1.0:
        return -1.0
    if norm_score > 1.0:
        return 1.0
    return norm_score


def allcap_differential(words):
    allcap_words = sum(1 for w in words if w.isupper())
    cap_differential = len(words) - allcap_words
    return 0 < cap_differential < len(words)


def scalar_inc_dec(word, valence, is_cap_diff):
    scalar = 0.0
    word_lower = word.lower()
    if word_lower in BOOSTER_DICT:
        scalar = BOOSTER_DICT[word_lower]
        if valence < 0:
            scalar *= -1
        if word.isupper() and is_cap_diff:
            if valence > 0:
                scalar += C_INCR
            else:
                scalar -= C_INCR
    return scalar


def _strip_punc_if_word(token):
    stripped = token.strip(string.punctuation)
    if len(stripped) <= 2:
        return token
    return stripped


def words_and_emoticons(text):
    return [_strip_punc_if_word(t) for t in text.split()]


class SentimentAnalyzer:
    def __init__(self, lexicon_path):
        self.lexicon = {}
        with open(lexicon_path, encoding="utf-8") as f:
            for line in f:
                line = line.rstrip("\n")
                if not line.strip():
                    continue
                cols = line.split("\t")
                if len(cols) >= 2:
                    self.lexicon[cols[0]] = float(cols[1])

    def polarity_scores(self, text):
        wes = words_and_emoticons(text)
        is_cap_diff = allcap_differential(wes)
        sentiments = []
        for i, item in enumerate(wes):
            valence = 0.0
            if item.lower() in BOOSTER_DICT:
                sentiments.append(valence)
                continue
            if (i < len(wes) - 1 and item.lower() == "kind"
                    and wes[i + 1].lower() == "of"):
                sentiments.append(valence)
                continue
            sentiments = self._sentiment_valence(valence, wes, is_cap_diff,
                                                 item, i, sentiments)
        sentiments = self._but_check(wes, sentiments)
        return self._score_valence(sentiments, text)

    def _sentiment_valence(self, valence, wes, is_cap_diff, item, i, sentiments):
        item_lowercase = item.lower()
        if item_lowercase in self.lexicon:
            valence = self.lexicon[item_lowercase]

            if (item_lowercase == "no" and i != len(wes) - 1
                    and wes[i + 1].lower() in self.lexicon):
                valence = 0.0
            if ((i > 0 and wes[i - 1].lower() == "no")
                    or (i > 1 and wes[i - 2].lower() == "no")
                    or (i > 2 and wes[i - 3].lower() == "no"
                        and wes[i - 1].lower() in ["or", "nor"])):
                valence = self.lexicon[item_lowercase] * N_SCALAR

            if item.isupper() and is_cap_diff:
                if valence > 0:
                    valence += C_INCR
                else:
                    valence -= C_INCR

            for start_i in range(0, 3):
                if i > start_i and wes[i - (start_i + 1)].lower() not in self.lexicon:
                    s = scalar_inc_dec(wes[i - (start_i + 1)], valence, is_cap_diff)
                    if start_i == 1 and s != 0:
                        s = s * 0.95
                    if start_i == 2 and s != 0:
                        s = s * 0.9
                    valence = valence + s
                    valence = self._negation_check(valence, wes, start_i, i)
                    if start_i == 2:
                        valence = self._special_idioms_check(valence, wes, i)

            valence = self._least_check(valence, wes, i)
        sentiments.append(valence)
        return sentiments

    def _least_check(self, valence, wes, i):
        if (i > 1 and wes[i - 1].lower() not in self.lexicon
                and wes[i - 1].lower() == "least"):
            if wes[i - 2].lower() != "at" and wes[i - 2].lower() != "very":
                valence = valence * N_SCALAR
        elif (i > 0 and wes[i - 1].lower() not in self.lexicon
                and wes[i - 1].lower() == "least"):
            valence = valence * N_SCALAR
        return valence

    @staticmethod
    def _but_check(wes, sentiments):
        wes_lower = [w.lower() for w in wes]
        if "but" in wes_lower:
            bi = wes_lower.index("but")
            for sentiment in sentiments:
                si = sentiments.index(sentiment)
                if si < bi:
                    sentiments.pop(si)
                    sentiments.insert(si, sentiment * 0.5)
                elif si > bi:
                    sentiments.pop(si)
                    sentiments.insert(si, sentiment * 1.5)
        return sentiments

    @staticmethod
    def _special_idioms_check(valence, wes, i):
        wes_lower = [w.lower() for w in wes]
        onezero = "{0} {1}".format(wes_lower[i - 1], wes_lower[i])
        twoonezero = "{0} {1} {2}".format(wes_lower[i - 2], wes_lower[i - 1], wes_lower[i])
        twoone = "{0} {1}".format(wes_lower[i - 2], wes_lower[i - 1])
        threetwoone = "{0} {1} {2}".format(wes_lower[i - 3], wes_lower[i - 2], wes_lower[i - 1])
        threetwo = "{0} {1}".format(wes_lower[i - 3], wes_lower[i - 2])

        sequences = [onezero, twoonezero, twoone, threetwoone, threetwo]
        for seq in sequences:
            if seq in SPECIAL_CASES:
                valence = SPECIAL_CASES[seq]
                break

        if len(wes_lower) - 1 > i:
            zeroone = "{0} {1}".format(wes_lower[i], wes_lower[i + 1])
            if zeroone in SPECIAL_CASES:
                valence = SPECIAL_CASES[zeroone]
        if len(wes_lower) - 1 > i + 1:
            zeroonetwo = "{0} {1} {2}".format(wes_lower[i], wes_lower[i + 1], wes_lower[i + 2])
            if zeroonetwo in SPECIAL_CASES:
                valence = SPECIAL_CASES[zeroonetwo]

        n_grams = [threetwoone, threetwo, twoone]
        for n_gram in n_grams:
            if n_gram in BOOSTER_DICT:
                valence = valence + BOOSTER_DICT[n_gram]
        return valence

    @staticmethod
    def _negation_check(valence, wes, start_i, i):
        wes_lower = [w.lower() for w in wes]
        if start_i == 0:
            if negated([wes_lower[i - (start_i + 1)]]):
                valence = valence * N_SCALAR
        if start_i == 1:
            if wes_lower[i - 2] == "never" and wes_lower[i - 1] in ("so", "this"):
                valence = valence * 1.25
            elif wes_lower[i - 2] == "without" and wes_lower[i - 1] == "doubt":
                pass
            elif negated([wes_lower[i - (start_i + 1)]]):
                valence = valence * N_SCALAR
        if start_i == 2:
            if (wes_lower[i - 3] == "never"
                    and (wes_lower[i - 2] in ("so", "this"))
                    or (wes_lower[i - 1] in ("so", "this"))):
                valence = valence * 1.25
            elif wes_lower[i - 3] == "without" and (
                    wes_lower[i - 2] == "doubt" or wes_lower[i - 1] == "doubt"):
                pass
            elif negated([wes_lower[i - (start_i + 1)]]):
                valence = valence * N_SCALAR
        return valence

    @staticmethod
    def _punctuation_emphasis(text):
        ep_count = text.count("!")
        if ep_count > 4:
            ep_count = 4
        ep_amplifier = ep_count * 0.292

        qm_count = text.count("?")
        qm_amplifier = 0
        if qm_count > 1:
            if qm_count <= 3:
                qm_amplifier = qm_count * 0.18
            else:
                qm_amplifier = 0.96
        return ep_amplifier + qm_amplifier

    @staticmethod
    def _sift_sentiment_scores(sentiments):
        pos_sum = 0.0
        neg_sum = 0.0
        neu_count = 0
        for s in sentiments:
            if s > 0:
                pos_sum += float(s) + 1
            if s < 0:
                neg_sum += float(s) - 1
            if s == 0:
                neu_count += 1
        return pos_sum, neg_sum, neu_count

    def _score_valence(self, sentiments, text):
        if sentiments:
            sum_s = float(sum(sentiments))
            punct_emph_amplifier = self._punctuation_emphasis(text)
            if sum_s > 0:
                sum_s += punct_emph_amplifier
            elif sum_s < 0:
                sum_s -= punct_emph_amplifier

            compound = normalize(sum_s)
            pos_sum, neg_sum, neu_count = self._sift_sentiment_scores(sentiments)

            if pos_sum > math.fabs(neg_sum):
                pos_sum += punct_emph_amplifier
            elif pos_sum < math.fabs(neg_sum):
                neg_sum -= punct_emph_amplifier

            total = pos_sum + math.fabs(neg_sum) + neu_count
            pos = math.fabs(pos_sum / total)
            neg = math.fabs(neg_sum / total)
            neu = math.fabs(neu_count / total)
        else:
            pos = neg = neu = compound = 0.0

        return {"neg": neg, "neu": neu, "pos": pos, "compound": compound}
