#!/usr/bin/env python3
# Copyright 2026 The alignaudit Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the bundled fixture taxonomy and mini item bank under data/.

The taxonomy has the K-5 pool sizes of a real Math/Reading skill bank
(12..36 skills per grade and subject). Texts are original and synthetic.
Output is deterministic; rerunning rewrites identical files.
"""

import csv
import json
import pathlib
import random

POOL_SIZES = {
    ("Math", "K"): 12, ("Math", "1"): 15, ("Math", "2"): 19,
    ("Math", "3"): 26, ("Math", "4"): 31, ("Math", "5"): 22,
    ("Reading", "K"): 32, ("Reading", "1"): 30, ("Reading", "2"): 31,
    ("Reading", "3"): 33, ("Reading", "4"): 36, ("Reading", "5"): 33,
}

# (skill name, skill statement, item stem)
MATH = {
    "Counting & Cardinality": [
        ("Count to 100", "Count to 100 by ones and by tens.", "Count by tens. What number comes after 60?"),
        ("Count Objects", "Count objects to tell how many there are, up to 20 objects.", "How many apples are in the basket? Count them."),
        ("Compare Groups of Objects", "Identify whether the number of objects in one group is greater than, less than, or equal to the number in another group.", "Which group has more stars, the red group or the blue group?"),
        ("Write Numerals", "Write numbers from 0 to 20 and represent a number of objects with a written numeral.", "Write the numeral that shows how many dots are on the card."),
        ("Count Forward From a Number", "Count forward beginning from a given number within the known sequence instead of starting at 1.", "Start at 14 and count forward. Which number comes next?"),
        ("Compare Written Numerals", "Compare two numbers between 1 and 10 presented as written numerals.", "Which numeral is greater, 7 or 4?"),
        ("Decompose Numbers to 10", "Decompose numbers less than or equal to 10 into pairs in more than one way using objects or drawings.", "Show two ways to break 8 blocks into two groups."),
        ("Count Out a Set", "Given a number from 1 to 20, count out that many objects.", "Put 12 counters on the mat. How many counters are on the mat?"),
    ],
    "Numbers & Operations": [
        ("Multiply Using Place Value", "Multiply a one-digit number by a two-digit multiple of 10 using understanding of place value and properties of operations.", "What is 4 times 30? Use place value to multiply."),
        ("Add Within 20", "Add and subtract within 20 using strategies such as counting on and making ten.", "Make a ten to add 8 and 5. What is the sum?"),
        ("Understand Place Value of Tens and Ones", "Understand that the two digits of a two-digit number represent amounts of tens and ones.", "How many tens and how many ones are in the number 47?"),
        ("Round Whole Numbers", "Use place value understanding to round whole numbers to the nearest 10 or 100.", "Round 263 to the nearest hundred."),
        ("Add and Subtract Within 1000", "Fluently add and subtract within 1000 using strategies and algorithms based on place value.", "Subtract 358 from 702. What is the difference?"),
        ("Divide Multi-Digit Numbers", "Find whole-number quotients and remainders with up to four-digit dividends and one-digit divisors.", "What is 845 divided by 5? Show the quotient."),
        ("Read and Write Decimals", "Read, write, and compare decimals to thousandths using base-ten numerals and expanded form.", "Which decimal is greater, 0.305 or 0.35?"),
        ("Multiply Multi-Digit Whole Numbers", "Fluently multiply multi-digit whole numbers using the standard algorithm.", "Multiply 236 by 14 using the standard algorithm."),
    ],
    "Fractions & Ratios": [
        ("Understand Fractions Using a Number Line", "Understand that fractions are numbers that can be located on a number line. Represent fractions 1/b or a/b on a number line where b is limited to 2, 3, 4, 6, or 8.", "What fraction does the location of point S represent on the number line?"),
        ("Express Whole Numbers as Fractions", "Express whole numbers as fractions and recognize fractions that are equivalent to whole numbers.", "Which fraction is equal to the whole number 3?"),
        ("Compare Fractions", "Compare two fractions with the same numerator or the same denominator by reasoning about their size.", "Which fraction is greater, 3/8 or 3/4?"),
        ("Find Equivalent Fractions", "Explain why two fractions are equivalent by using visual fraction models.", "Shade the model to show a fraction equivalent to 1/2."),
        ("Add Fractions With Like Denominators", "Add and subtract fractions and mixed numbers with like denominators.", "What is 2/6 plus 3/6?"),
        ("Multiply Fractions by Whole Numbers", "Multiply a fraction by a whole number using visual models and equations.", "What is 3 times 2/5?"),
        ("Partition Shapes Into Equal Shares", "Partition circles and rectangles into two and four equal shares and describe the shares using halves and fourths.", "Which picture shows a circle cut into fourths?"),
        ("Divide Unit Fractions", "Divide unit fractions by whole numbers and whole numbers by unit fractions.", "How many 1/4 cup servings are in 3 cups of rice?"),
    ],
    "Algebraic Thinking": [
        ("Solve Word Problems With Addition", "Use addition and subtraction within 20 to solve word problems involving adding to and taking from.", "Sam had 9 marbles and found 6 more. How many marbles does Sam have now?"),
        ("Find Unknown Numbers in Equations", "Determine the unknown whole number in an addition or subtraction equation relating three whole numbers.", "What number makes this equation true: 8 + ? = 15?"),
        ("Identify Arithmetic Patterns", "Identify arithmetic patterns in the addition table or multiplication table and explain them using properties of operations.", "Look at the pattern 4, 8, 12, 16. What is the rule?"),
        ("Solve Two-Step Word Problems", "Solve two-step word problems using the four operations and represent them with equations.", "A class buys 3 packs of 8 pencils and gives away 5. How many pencils are left?"),
        ("Understand Multiplication as Equal Groups", "Interpret products of whole numbers as the total number of objects in equal groups.", "There are 5 bags with 4 oranges in each bag. How many oranges are there?"),
        ("Write and Interpret Numerical Expressions", "Write simple expressions that record calculations with numbers and interpret numerical expressions with parentheses.", "Which expression means add 8 and 7, then multiply by 2?"),
        ("Generate Number Patterns", "Generate two numerical patterns using two given rules and identify relationships between corresponding terms.", "Start at 0 and add 3, and start at 0 and add 6. Compare the patterns."),
        ("Find Factors and Multiples", "Find all factor pairs for a whole number in the range 1 to 100 and determine whether it is prime or composite.", "List all the factor pairs of 24."),
    ],
    "Measurement & Data": [
        ("Tell Time", "Tell and write time in hours and half-hours using analog and digital clocks.", "What time does the clock show? The hour hand is on 3 and the minute hand is on 12."),
        ("Measure Lengths", "Measure the length of an object by selecting and using appropriate tools such as rulers and yardsticks.", "Use the ruler. How many inches long is the pencil?"),
        ("Interpret Bar Graphs", "Draw a scaled bar graph to represent a data set and solve problems using information presented in bar graphs.", "Use the bar graph. How many more students chose soccer than tennis?"),
        ("Find Area of Rectangles", "Find the area of a rectangle with whole-number side lengths by tiling and multiplying side lengths.", "A rectangle is 6 units long and 4 units wide. What is its area?"),
        ("Solve Money Problems", "Solve word problems involving dollar bills, quarters, dimes, nickels, and pennies.", "Mia has 2 quarters and 3 dimes. How much money does she have?"),
        ("Find Volume of Rectangular Prisms", "Relate volume to multiplication and addition and find volumes of right rectangular prisms.", "A box is 3 cm long, 2 cm wide, and 4 cm tall. What is its volume?"),
        ("Convert Measurement Units", "Convert among different-sized standard measurement units within a given measurement system.", "How many inches are in 3 feet?"),
        ("Find Perimeter of Polygons", "Solve real-world problems involving perimeters of polygons, including finding an unknown side length.", "A square garden has sides of 5 meters. What is its perimeter?"),
    ],
    "Geometry": [
        ("Identify Two-Dimensional Shapes", "Correctly name shapes regardless of their orientations or overall size.", "Which shape has three sides and three corners?"),
        ("Classify Shapes by Attributes", "Understand that shapes in different categories may share attributes, such as having four sides.", "Which of these shapes is a quadrilateral?"),
        ("Draw and Identify Angles", "Draw and identify points, lines, line segments, rays, and right, acute, and obtuse angles.", "Is the angle shown acute, right, or obtuse?"),
        ("Graph Points on a Coordinate Plane", "Graph points in the first quadrant of the coordinate plane to solve real-world problems.", "Plot the point (3, 5) on the coordinate grid."),
        ("Identify Lines of Symmetry", "Recognize a line of symmetry for a two-dimensional figure and draw lines of symmetry.", "How many lines of symmetry does a rectangle have?"),
        ("Compose Shapes", "Compose two-dimensional shapes to form composite shapes.", "Which two triangles can be put together to make a square?"),
        ("Describe Positions of Objects", "Describe the positions of objects using terms such as above, below, beside, in front of, behind, and next to.", "Which toy is behind the box?"),
        ("Identify Three-Dimensional Shapes", "Identify shapes as two-dimensional or three-dimensional, such as cubes, cones, cylinders, and spheres.", "Which object is shaped like a cylinder?"),
    ],
}

READING = {
    "Phonics & Word Recognition": [
        ("Recognize Rhyming Words", "Recognize and produce rhyming words.", "Which word rhymes with cat: hat, dog, or sun?"),
        ("Identify Beginning Sounds", "Isolate and pronounce the initial sound in spoken single-syllable words.", "What sound do you hear at the beginning of the word ball?"),
        ("Decode Short Vowel Words", "Decode regularly spelled one-syllable words with short vowel sounds.", "Read the word. Which picture shows a pig?"),
        ("Read Long Vowel Words", "Know final -e and common vowel team conventions for representing long vowel sounds.", "Which word has a long a sound: cake, cat, or can?"),
        ("Blend Syllables", "Count, pronounce, blend, and segment syllables in spoken words.", "How many syllables are in the word butterfly?"),
        ("Use Prefixes and Suffixes", "Identify and know the meaning of the most common prefixes and derivational suffixes.", "What does the prefix un- mean in the word unhappy?"),
        ("Read Irregular Words", "Recognize and read grade-appropriate irregularly spelled sight words.", "Which sight word completes the sentence: I ___ a dog?"),
        ("Decode Multisyllable Words", "Use combined knowledge of letter-sound correspondences and syllabication patterns to read unfamiliar multisyllabic words.", "Break the word remarkable into syllables."),
    ],
    "Language and Vocabulary": [
        ("Categories of Objects", "Sort objects into categories.", "Which of these belongs in the fruit group: apple, chair, or shoe?"),
        ("Use Context Clues", "Use sentence-level context as a clue to the meaning of a word or phrase.", "Read the sentence. What does the word tragic most likely mean?"),
        ("Identify Synonyms", "Distinguish shades of meaning among closely related verbs and adjectives.", "Which word means almost the same as huge?"),
        ("Identify Antonyms", "Demonstrate understanding of frequently occurring words by relating them to their opposites.", "Which word is the opposite of hot?"),
        ("Determine Meanings of Multiple-Meaning Words", "Determine or clarify the meaning of multiple-meaning words and phrases.", "In which sentence does the word bat mean an animal?"),
        ("Interpret Figurative Language", "Interpret figurative language, including similes and metaphors, in context.", "What does the simile as busy as a bee tell about the character?"),
        ("Use Root Words", "Use a known root word as a clue to the meaning of an unknown word with the same root.", "The root port means carry. What does transport mean?"),
        ("Use Reference Materials", "Consult reference materials such as glossaries and dictionaries to find the pronunciation and meaning of words.", "Which guide words would be on the dictionary page with the word pencil?"),
    ],
    "Literature": [
        ("Identify Characters and Setting", "With prompting and support, identify characters, settings, and major events in a story.", "Where does the story about the lost puppy take place?"),
        ("Retell Stories", "Retell stories, including key details, and demonstrate understanding of their central message.", "Which sentence best retells what happens in the story?"),
        ("Determine Theme", "Determine a theme of a story from details in the text and summarize the text.", "What lesson does the fox learn at the end of the fable?"),
        ("Describe Character Traits", "Describe characters in a story, such as their traits, motivations, or feelings, and explain how their actions contribute to events.", "Which word best describes how Maya feels when she wins the race?"),
        ("Compare Stories", "Compare and contrast two or more versions of the same story by different authors or from different cultures.", "How are the two versions of Cinderella alike?"),
        ("Identify Point of View", "Distinguish their own point of view from that of the narrator or those of the characters.", "Who is telling the story, and how do you know?"),
        ("Explain Poem Structure", "Refer to parts of poems, such as stanza and verse, when writing or speaking about a text.", "How many stanzas are in the poem about the ocean?"),
        ("Make Inferences From Literature", "Refer to details and examples in a text when explaining what the text says explicitly and when drawing inferences.", "Why does the boy hide the broken vase? Use details from the story."),
    ],
    "Informational Text": [
        ("Identify the Main Topic", "Identify the main topic and retell key details of an informational text.", "What is the article about frogs mostly about?"),
        ("Use Text Features", "Know and use various text features, such as captions, bold print, headings, and glossaries, to locate key facts.", "Which heading tells where to find information about what bees eat?"),
        ("Determine the Main Idea", "Determine the main idea of a text and explain how it is supported by key details.", "Which sentence states the main idea of the passage about volcanoes?"),
        ("Explain Cause and Effect", "Describe the relationship between a series of historical events or scientific ideas using language that pertains to cause and effect.", "What caused the river to flood in the passage?"),
        ("Identify Author's Purpose", "Identify the main purpose of a text, including what the author wants to answer, explain, or describe.", "Why did the author write the passage about recycling?"),
        ("Compare Two Texts on a Topic", "Compare and contrast the most important points and key details presented in two texts on the same topic.", "How is the information about whales in the two articles different?"),
        ("Use Illustrations and Diagrams", "Use information gained from illustrations, diagrams, and the words in a text to demonstrate understanding.", "Use the diagram. What part of the plant takes in water?"),
        ("Explain Reasons and Evidence", "Explain how an author uses reasons and evidence to support particular points in a text.", "Which evidence supports the author's point that exercise is healthy?"),
    ],
    "Writing & Conventions": [
        ("Capitalize Sentences", "Capitalize the first word in a sentence and the pronoun I.", "Which sentence uses capital letters correctly?"),
        ("Use End Punctuation", "Recognize and name end punctuation, including periods, question marks, and exclamation points.", "Which punctuation mark belongs at the end of: Where is my hat"),
        ("Use Plural Nouns", "Form and use regular and irregular plural nouns.", "What is the plural of mouse?"),
        ("Use Verb Tenses", "Form and use the simple verb tenses, such as past, present, and future.", "Which word shows that the action already happened: jump, jumped, or will jump?"),
        ("Use Commas in a Series", "Use commas to separate single words in a series.", "Which sentence uses commas correctly in a list of fruits?"),
        ("Combine Sentences", "Produce, expand, and rearrange complete simple and compound sentences.", "Which is the best way to combine the two sentences about the dog?"),
        ("Use Quotation Marks", "Use commas and quotation marks to mark direct speech and quotations from a text.", "Which sentence uses quotation marks correctly?"),
        ("Use Conjunctions", "Use frequently occurring conjunctions such as and, but, or, so, and because.", "Which word best joins the sentences: I was tired ___ I went to bed?"),
    ],
    "Fluency & Foundations": [
        ("Follow Words Left to Right", "Follow words from left to right, top to bottom, and page by page.", "Point to the word you read first on this page."),
        ("Recognize Letters", "Recognize and name all upper- and lowercase letters of the alphabet.", "Which letter is the lowercase b?"),
        ("Read With Purpose and Understanding", "Read on-level text with purpose and understanding.", "Read the passage. What did the children find in the garden?"),
        ("Self-Correct Word Reading", "Use context to confirm or self-correct word recognition and understanding, rereading as necessary.", "The sentence says the horse ate the hay. Which word did the reader fix?"),
        ("Read With Expression", "Read grade-level text orally with accuracy, appropriate rate, and expression on successive readings.", "Which sentence should be read with excitement?"),
        ("Understand Spoken Words", "Understand that words are separated by spaces in print.", "How many words are in the sentence: The cat can run?"),
        ("Recognize Common Types of Texts", "Recognize common types of texts, such as storybooks and poems.", "Is this text a poem or a storybook?"),
        ("Ask and Answer Questions About a Text", "Ask and answer questions about key details in a text.", "Who helped the little hen bake the bread?"),
    ],
}

GRADES = ["K", "1", "2", "3", "4", "5"]

PINNED = {
    # grade-3 pools must carry the illustrative aligned/misaligned skills
    ("Math", "3", "Fractions & Ratios"): ["Understand Fractions Using a Number Line", "Express Whole Numbers as Fractions"],
    ("Math", "3", "Numbers & Operations"): ["Multiply Using Place Value"],
    ("Reading", "3", "Language and Vocabulary"): ["Categories of Objects"],
}


def build_taxonomy():
    rng = random.Random(20240718)
    skills = []
    for subject, bank in (("Math", MATH), ("Reading", READING)):
        domains = list(bank)
        for gi, grade in enumerate(GRADES):
            size = POOL_SIZES[(subject, grade)]
            per_domain = {d: 0 for d in domains}
            for i in range(size):
                per_domain[domains[(i + gi) % len(domains)]] += 1
            for d in domains:
                topics = list(bank[d])
                pinned = PINNED.get((subject, grade, d), [])
                chosen = [t for t in topics if t[0] in pinned]
                rest = [t for t in topics if t[0] not in pinned]
                rng.shuffle(rest)
                chosen += rest[: per_domain[d] - len(chosen)]
                for name, statement, stem in chosen:
                    skills.append(dict(grade=grade, subject=subject, domain=d,
                                       skill_name=name, skill_statement=statement, stem=stem))
    ids = list(range(100, 100 + len(skills)))
    rng.shuffle(ids)
    for s, i in zip(skills, ids):
        s["skill_id"] = str(i)
    return skills


def build_items(skills):
    rng = random.Random(3011)
    items = []
    n = 0
    for subject in ("Math", "Reading"):
        for grade in GRADES:
            pool = sorted((s for s in skills if s["grade"] == grade and s["subject"] == subject),
                          key=lambda s: s["skill_id"])
            picks = rng.sample(pool, 5)
            if (subject, grade) == ("Math", "3"):
                fn = next(s for s in pool if s["skill_name"] == "Understand Fractions Using a Number Line")
                if fn not in picks:
                    picks[0] = fn
            for s in picks:
                n += 1
                prompt = "Read the question and choose the best answer." if n % 3 == 0 else ""
                explanation = (f"A correct response shows the student can {s['skill_name'].lower()}."
                               if n % 2 == 0 else "")
                items.append(dict(item_id=f"I{n:03d}", grade=grade, subject=subject,
                                  prompt=prompt, stem=s["stem"], explanation=explanation,
                                  skill_id=s["skill_id"]))
    return items


def main():
    root = pathlib.Path(__file__).resolve().parent.parent / "data"
    root.mkdir(exist_ok=True)
    skills = build_taxonomy()
    with open(root / "skills.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["skill_id", "grade", "subject", "domain", "skill_name", "skill_statement"])
        for s in sorted(skills, key=lambda s: s["skill_id"]):
            w.writerow([s["skill_id"], s["grade"], s["subject"], s["domain"], s["skill_name"], s["skill_statement"]])
    items = build_items(skills)
    with open(root / "items.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["item_id", "grade", "subject", "prompt", "stem", "explanation", "skill_id"])
        for it in items:
            w.writerow([it[k] for k in ("item_id", "grade", "subject", "prompt", "stem", "explanation", "skill_id")])
    with open(root / "smoke_items.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["item_id", "grade", "subject", "prompt", "stem", "explanation", "skill_id"])
        for it in items[::3][:20]:
            w.writerow([it[k] for k in ("item_id", "grade", "subject", "prompt", "stem", "explanation", "skill_id")])

    by_name = {(s["grade"], s["subject"], s["skill_name"]): s for s in skills}
    fn = by_name[("3", "Math", "Understand Fractions Using a Number Line")]
    exemplar_item = {"stem": "Point P is halfway between 0 and 1 on the number line. What fraction names point P?"}

    def skill_of(grade, subject, name):
        s = by_name[(grade, subject, name)]
        return {"skill_id": s["skill_id"], "skill_name": s["skill_name"], "skill_statement": s["skill_statement"]}

    exemplars = {
        "canonical": False,
        "note": "Illustrative exemplars shipped with the fixture taxonomy; not taken from any published bank.",
        "exemplars": [
            {"item": exemplar_item, "skill": skill_of("3", "Math", fn["skill_name"]), "label": "aligned", "tier": None},
            {"item": exemplar_item, "skill": skill_of("3", "Reading", "Categories of Objects"), "label": "misaligned", "tier": "completely"},
            {"item": exemplar_item, "skill": skill_of("3", "Math", "Multiply Using Place Value"), "label": "misaligned", "tier": "somewhat"},
            {"item": exemplar_item, "skill": skill_of("3", "Math", "Express Whole Numbers as Fractions"), "label": "misaligned", "tier": "slightly"},
        ],
    }
    with open(root / "fewshot_exemplars.json", "w", encoding="utf-8") as f:
        json.dump(exemplars, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()
