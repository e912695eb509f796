"""Transcription of the measurement template.

Each entry is ``(question_id, prompt, answer_spec)``. The answer spec mini
language is parsed by :func:`sotpkit.catalog.parse_answer_spec`:

    enum: a | b* | c      one choice; ``*`` marks choices needing a note
    set: a | b | other*   comma separated subset of the choices
    number [lo..hi] [| special ...]
    percentage [| special ...]
    date | url | urls [| special ...] | string
"""

CATALOG_VERSION = "2021.1"
DECLARED_QUESTION_COUNT = 108

_OVERALL = ("Overall impression?", "number 1..10")
_COMMENTS = (
    "Additional comments? (can cover any metrics you feel are missing, or any "
    "other thoughts you have)",
    "string",
)


def _tail(prefix):
    return [
        (f"{prefix}.overall",) + _OVERALL,
        (f"{prefix}.comments",) + _COMMENTS,
    ]


SECTIONS = [
    ("summary", "Summary Information", [
        ("summary.name", "Software name?", "string"),
        ("summary.url", "URL?", "url"),
        ("summary.affiliation", "Affiliation (institution(s))", "string"),
        ("summary.purpose", "Software purpose", "string"),
        ("summary.developers",
         "Number of developers (all developers that have contributed at least one "
         "commit to the project) (use repo commit logs)", "number"),
        ("summary.funding", "How is the project funded?", "enum: unfunded | unclear | funded*"),
        ("summary.initial_release", "Initial release date?", "date"),
        ("summary.last_commit", "Last commit date?", "date"),
        ("summary.status",
         "Status? (alive is defined as presence of commits in the last 18 months)",
         "enum: alive | dead | unclear"),
        ("summary.license", "License?",
         "enum: GNU GPL | BSD | MIT | terms of use | trial | none | unclear | other*"),
        ("summary.platforms", "Platforms?", "set: Windows | Linux | OS X | Android | other*"),
        ("summary.category",
         "Software Category? The concept category includes software that does not "
         "have an officially released version. Public software has a released "
         "version in the public domain. Private software has a released version "
         "available to authorized users only.",
         "enum: concept | public | private"),
        ("summary.dev_model", "Development model?",
         "enum: open source | freeware | commercial | unclear"),
        ("summary.publications",
         "Publications about the software? Refers to publications that have used "
         "or mentioned the software.", "number | unknown"),
        ("summary.source_url", "Source code URL?", "urls | n/a | unclear"),
        ("summary.languages", "Programming language(s)?",
         "set: FORTRAN | Matlab | C | C++ | Java | R | Ruby | Python | Cython | BASIC "
         "| Pascal | IDL | unclear | other*"),
        ("summary.performance",
         "Is there evidence that performance was considered? Performance refers to "
         "either speed, storage, or throughput.", "enum: yes* | no"),
        ("summary.comments",) + _COMMENTS,
    ]),
    ("installability", "Installability (Measured via installation on a virtual machine.)", [
        ("install.instructions", "Are there installation instructions?", "enum: yes | no"),
        ("install.one_place",
         "Are the installation instructions in one place? Place referring to a single "
         "document or web-page.", "enum: yes | no | n/a"),
        ("install.linear",
         "Are the installation instructions linear? Linear meaning progressing in a "
         "single series of steps.", "enum: yes | no | n/a"),
        ("install.no_deps_assumed",
         "Are the instructions written as if the person doing the installation has "
         "none of the dependent packages installed?", "enum: yes | no | unclear"),
        ("install.os_versions", "Are compatible operating system versions listed?",
         "enum: yes | no"),
        ("install.automation",
         "Is there something in place to automate the installation (makefile, "
         "script, installer, etc)?", "enum: yes* | no"),
        ("install.error_message",
         "If the software installation broke, was a descriptive error message "
         "displayed?", "enum: yes | no | n/a"),
        ("install.validation", "Is there a specified way to validate the installation?",
         "enum: yes* | no"),
        ("install.steps",
         "How many steps were involved in the installation? (Includes manual steps "
         "like unzipping files) Specify OS.", "number"),
        ("install.os", "What OS was used for the installation?",
         "enum: Windows | Linux | OS X | Android | other*"),
        ("install.extra_packages",
         "How many extra software packages need to be installed before or during "
         "installation?", "number"),
        ("install.package_versions", "Are required package versions listed?",
         "enum: yes | no | n/a"),
        ("install.dependency_instructions",
         "Are there instructions for the installation of required packages / "
         "dependencies?", "enum: yes | no | n/a"),
        ("install.uninstall_problems",
         "Run uninstall, if available. Were any obvious problems caused?",
         "enum: yes* | no | unavail"),
    ] + _tail("install")),
    ("correctness", "Correctness and Verifiability", [
        ("correctness.requirements",
         "Any reference to the requirements specifications of the program or theory "
         "manuals?", "enum: yes* | no | unclear"),
        ("correctness.tools",
         "What tools or techniques are used to build confidence of correctness?",
         "set: literate programming | automated testing | symbolic execution | "
         "model checking | assertions used in the code | Sphinx | Doxygen | Javadoc | "
         "confluence | unclear | other*"),
        ("correctness.tutorial", "If there is a getting started tutorial?", "enum: yes | no"),
        ("correctness.tutorial_linear", "Are the tutorial instructions linear?",
         "enum: yes | no | n/a"),
        ("correctness.expected_output",
         "Does the getting started tutorial provide an expected output?",
         "enum: yes | no* | n/a"),
        ("correctness.output_match", "Does your tutorial output match the expected output?",
         "enum: yes | no | n/a"),
        ("correctness.unit_tests", "Are unit tests available?", "enum: yes | no | unclear"),
        ("correctness.ci",
         "Is there evidence of continuous integration? (for example mentioned in "
         "documentation, Jenkins, Travis CI, Bamboo, other)", "enum: yes* | no | unclear"),
    ] + _tail("correctness")),
    ("reliability", "Surface Reliability", [
        ("reliability.install_break", "Did the software “break” during installation?",
         "enum: yes* | no"),
        ("reliability.install_recoverable",
         "If the software installation broke, was the installation instance "
         "recoverable?", "enum: yes | no | n/a"),
        ("reliability.tutorial_break",
         "Did the software “break” during the initial tutorial testing?",
         "enum: yes* | no | n/a"),
        ("reliability.tutorial_error_message",
         "If the tutorial testing broke, was a descriptive error message displayed?",
         "enum: yes | no | n/a"),
        ("reliability.tutorial_recoverable",
         "If the tutorial testing broke, was the tutorial testing instance "
         "recoverable?", "enum: yes | no | n/a"),
    ] + _tail("reliability")),
    ("robustness", "Surface Robustness", [
        ("robustness.unexpected_input",
         "Does the software handle unexpected/unanticipated input (like data of the "
         "wrong type, empty input, missing files or links) reasonably? (a reasonable "
         "response can include an appropriate error message.)", "enum: yes | no*"),
        ("robustness.newlines",
         "For any plain text input files, if all new lines are replaced with new "
         "lines and carriage returns, will the software handle this gracefully?",
         "enum: yes | no* | n/a"),
    ] + _tail("robustness")),
    ("usability", "Surface Usability", [
        ("usability.tutorial", "Is there a getting started tutorial?", "enum: yes | no"),
        ("usability.user_manual", "Is there a user manual?", "enum: yes | no"),
        ("usability.user_characteristics", "Are expected user characteristics documented?",
         "enum: yes | no"),
        ("usability.support_model",
         "What is the user support model? FAQ? User forum? E-mail address to direct "
         "questions? Etc.",
         "set: FAQ | user forum | e-mail | mailing list | issue tracker | chat | "
         "none | other*"),
    ] + _tail("usability")),
    ("maintainability", "Maintainability", [
        ("maintainability.version", "What is the current version number?", "string"),
        ("maintainability.contributing",
         "Is there any information on how code is reviewed, or how to contribute?",
         "enum: yes* | no"),
        ("maintainability.artifacts",
         "Are artifacts available? (List every type of file that is not a code file)",
         "enum: yes* | no | unclear"),
        ("maintainability.issue_tracker", "What issue tracking tool is employed?",
         "set: Trac | JIRA | Redmine | e-mail | discussion board | sourceforge | "
         "google code | git | BitBucket | none | unclear | other*"),
        ("maintainability.pct_issues_closed",
         "What is the percentage of identified issues that are closed?",
         "percentage | n/a"),
        ("maintainability.pct_comments", "What percentage of code is comments?",
         "percentage | n/a"),
        ("maintainability.vcs", "Which version control system is in use?",
         "enum: svn | cvs | git | Github | unclear | other*"),
    ] + _tail("maintainability")),
    ("reusability", "Reusability", [
        ("reusability.code_files", "How many code files are there?", "number"),
        ("reusability.api_documented", "Is API documented?", "enum: yes | no | n/a"),
    ] + _tail("reusability")),
    ("understandability", "Surface Understandability (Based on 10 random source files)", [
        ("understandability.indentation", "Consistent indentation and formatting style?",
         "enum: yes | no | n/a"),
        ("understandability.coding_standard", "Explicit identification of a coding standard?",
         "enum: yes* | no | n/a"),
        ("understandability.identifiers",
         "Are the code identifiers consistent, distinctive, and meaningful?",
         "enum: yes | no* | n/a"),
        ("understandability.constants",
         "Are constants (other than 0 and 1) hard coded into the program?",
         "enum: yes | no* | n/a"),
        ("understandability.comment_quality",
         "Comments are clear, indicate what is being done, not how?",
         "enum: yes | no* | n/a"),
        ("understandability.parameter_order",
         "Parameters are in the same order for all functions?", "enum: yes | no* | n/a"),
        ("understandability.algorithms_named",
         "Is the name/URL of any algorithms used mentioned?", "enum: yes | no* | n/a"),
        ("understandability.modularized", "Is code modularized?", "enum: yes | no* | n/a"),
    ] + _tail("understandability")),
    ("visibility", "Visibility/Transparency", [
        ("visibility.dev_process",
         "Is the development process defined? If yes, what process is used.",
         "enum: yes* | no | n/a"),
        ("visibility.process_docs",
         "Are there any documents recording the development process and status?",
         "enum: yes* | no"),
        ("visibility.dev_environment", "Is the development environment documented?",
         "enum: yes* | no"),
        ("visibility.release_notes", "Are there release notes?", "enum: yes* | no"),
    ] + _tail("visibility")),
    ("gitstats", "Raw Metrics (Measured via git_stats)", [
        ("gitstats.text_files", "Number of text-based files.", "number"),
        ("gitstats.binary_files", "Number of binary files.", "number"),
        ("gitstats.total_lines", "Number of total lines in text-based files.", "number"),
        ("gitstats.lines_added", "Number of total lines added to text-based files.", "number"),
        ("gitstats.lines_deleted", "Number of total lines deleted from text-based files.",
         "number"),
        ("gitstats.total_commits", "Number of total commits.", "number"),
        ("gitstats.commits_by_year",
         "Numbers of commits by year in the last 5 years. (Count from as early as "
         "possible if the project is younger than 5 years.)", "string"),
        ("gitstats.commits_by_month", "Numbers of commits by month in the last 12 months.",
         "string"),
    ]),
    ("scc", "Raw Metrics (Measured via scc)", [
        ("scc.text_files", "Number of text-based files.", "number"),
        ("scc.total_lines", "Number of total lines in text-based files.", "number"),
        ("scc.code_lines", "Number of code lines in text-based files.", "number"),
        ("scc.comment_lines", "Number of comment lines in text-based files.", "number"),
        ("scc.blank_lines", "Number of blank lines in text-based files.", "number"),
    ]),
    ("github", "Repo Metrics (Measured via GitHub)", [
        ("github.stars", "Number of stars.", "number"),
        ("github.forks", "Number of forks.", "number"),
        ("github.watchers", "Number of people watching this repo.", "number"),
        ("github.open_prs", "Number of open pull requests.", "number"),
        ("github.closed_prs", "Number of closed pull requests.", "number"),
    ]),
]

QUALITY_SECTIONS = (
    "installability",
    "correctness",
    "reliability",
    "robustness",
    "usability",
    "maintainability",
    "reusability",
    "understandability",
    "visibility",
)
