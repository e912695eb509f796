"""The developer interview packet: 8 background and 12 software questions."""

from __future__ import annotations

from dataclasses import dataclass

PREAMBLE = (
    "Interviews will be one-to-one and will be open-ended (not just \"yes or no\" "
    "answers). Because of this, the exact wording of the questions may change a "
    "little. If more information, or clarification, is needed during the "
    "conversation, follow up questions will be asked, such as: \"So, you are saying "
    "that ...?\", \"Please tell me more?\", or \"Why do you think that is?\""
)


@dataclass(frozen=True)
class InterviewQuestion:
    number: int
    section: str
    text: str
    # research-question tags as written in the bracket, e.g. ("5b", "5i")
    tags: tuple[str, ...] = ()
    bracket: str = ""

    def render(self) -> str:
        return f"{self.number}. {self.text}" + (f" {self.bracket}" if self.bracket else "")


BACKGROUND = (
    "Interviewees' current position/title? degrees?",
    "Interviewees' contribution to/relationship with the software?",
    "Length of time the interviewee has been involved with this software?",
    "How large is the development group?",
    "Do you have a defined process for accepting new contributions into your team?",
    "What is the typical background of a developer?",
    "What is your estimated number of users? How did you come up with that estimate?",
    "What is the typical background of a user?",
)

# (question, tags, bracket text)
SOFTWARE = (
    ("Currently, what are the most significant obstacles in your development process?",
     (), ""),
    ("How might you change your development process to remove or reduce these obstacles?",
     (), ""),
    ("How does documentation fit into your development process? Would improved "
     "documentation help with the obstacles you typically face?",
     ("5b", "5i"),
     "[research question 5b (traceability), research question 5i (visibility/transparency)]"),
    ("In the past, is there any major obstacle to your development process that has been "
     "solved? How did you solve it?", (), ""),
    ("What is your software development model? For example, waterfall, agile, etc.", (), ""),
    ("What is your project management process? Do you think improve this process can tackle "
     "the current problem? Were any project management tools used?", (), ""),
    ("Was it hard to ensure the correctness of the software? If there were any obstacles, "
     "what methods have been considered or practiced to improve the situation? If practiced, "
     "did it work?",
     ("5e",), "[research question 5e (correctness)]"),
    ("When designing the software, did you consider the ease of future changes? For example, "
     "will it be hard to change the structure of the system, modules or code blocks? What "
     "measures have been taken to ensure the ease of future changes and maintains?",
     ("5d", "5c"),
     "[research question 5d (maintainability), research question 5c (modifiability)]"),
    ("Provide instances where users have misunderstood the software. What, if any, actions "
     "were taken to address understandability issues?",
     ("5f",), "[research question 5f (understandability)]"),
    ("What, if any, actions were taken to address usability issues?",
     ("5a",), "[research question 5a (usability)]"),
    ("Do you think the current documentation can clearly convey all necessary knowledge to "
     "the users? If yes, how did you successfully achieve it? If no, what improvements are "
     "needed?",
     ("5g",), "[research question 5g (unambiguity)]"),
    ("Do you have any concern that your computational results won't be reproducible in the "
     "future? Have you taken any steps to ensure reproducibility?",
     ("5h",), "[research question 5h (reproducibility)]"),
)


def interview_questions() -> tuple[InterviewQuestion, ...]:
    out = [InterviewQuestion(i, "background", text) for i, text in enumerate(BACKGROUND, 1)]
    start = len(out) + 1
    for i, (text, tags, bracket) in enumerate(SOFTWARE, start):
        out.append(InterviewQuestion(i, "software", text, tags, bracket))
    return tuple(out)


def emit_interview_guide() -> str:
    """Plain-text interview packet, numbered 1-20 across both sections."""
    qs = interview_questions()
    lines = ["Developer interview guide", "", PREAMBLE, "",
             "Information about the developers and users", ""]
    lines += [q.render() for q in qs if q.section == "background"]
    lines += ["", "Information about the software", "",
              "Square brackets give traceability to the related research questions.", ""]
    lines += [q.render() for q in qs if q.section == "software"]
    return "\n".join(lines) + "\n"
