#!/usr/bin/env python3
"""Regenerate the bundled policy / non-policy training corpus.

Documents are assembled from sentence pools with a fixed seed, so running this
script twice produces identical files. Output layout:

    data/corpus/train/labels.tsv     path<TAB>label   (policy | other)
    data/corpus/train/*.txt
    data/corpus/holdout/labels.tsv
    data/corpus/holdout/*.txt
"""

import os
import random
import sys

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "data", "corpus")

COMPANIES = [
    "Northwind Labs Inc.", "Bluepeak Media Ltd.", "Quantora GmbH", "Helio Apps LLC",
    "Sandpiper Games Oy", "Crescent Health Corp.", "Vireo Analytics S.L.", "Tallgrass Software AB",
    "Orchid Mobile Pty Ltd", "Redwood Commerce PLC", "Lumen Fitness B.V.", "Kestrel Travel SRL",
    "Brightline Studios Inc.", "Meridian Payments Limited", "Foxglove Learning Ltd.",
    "Cobalt Weather Corporation", "Pinecone Social GmbH", "Atlas Navigation LLC",
]
PRODUCTS = ["app", "website", "platform", "service", "game", "mobile application", "services"]
COUNTRIES = ["the United States", "Ireland", "Germany", "Spain", "the United Kingdom", "Singapore", "Canada"]


def fill(s, rng, company, product):
    return (s.replace("{company}", company)
             .replace("{product}", product)
             .replace("{country}", rng.choice(COUNTRIES))
             .replace("{days}", str(rng.choice([30, 60, 90, 180, 365])))
             .replace("{email}", "privacy@" + company.split()[0].lower() + ".example"))


POLICY_SECTIONS = [
    ("Who we are", [
        "This Privacy Policy explains how {company} collects, uses and shares personal data when you use our {product}.",
        "{company} (\"we\", \"us\" or \"our\") is the data controller responsible for your personal information.",
        "The {product} is provided and controlled by {company}, which acts as the controller of your data.",
        "This notice describes the privacy practices of {company} and applies to all users of the {product}.",
        "We respect your privacy and are committed to protecting the personal data we process about you.",
        "Please read this privacy notice carefully to understand our views and practices regarding your personal data.",
    ]),
    ("Information we collect", [
        "We collect information you provide directly to us, such as your name, email address and phone number.",
        "When you use the {product}, we automatically collect device identifiers, IP address, browser type and operating system.",
        "We may collect precise or approximate location data if you grant the relevant permission on your device.",
        "We collect usage data such as the pages you visit, the features you use and the time spent on the {product}.",
        "If you make a purchase, we collect payment details through our payment processors.",
        "We receive information about you from third parties, including advertising partners and analytics providers.",
        "The personal information we collect includes contact details, account credentials and communication preferences.",
        "Advertising identifiers such as the Google Advertising ID may be collected to measure campaign performance.",
    ]),
    ("How we use your information", [
        "We use your personal data to provide, maintain and improve the {product}.",
        "We process your information to personalize content, to send you service messages and to respond to your requests.",
        "Your data is used to detect, investigate and prevent fraudulent transactions and other illegal activities.",
        "We rely on your consent, the performance of a contract and our legitimate interests as legal bases for processing.",
        "We may use aggregated or de-identified information for research and analytics purposes.",
        "With your consent we use your information to send marketing communications, which you can opt out of at any time.",
    ]),
    ("How we share your information", [
        "We share personal data with service providers who process it on our behalf, such as hosting and analytics vendors.",
        "We may disclose your information to advertising partners to show you relevant ads.",
        "We do not sell your personal information to third parties.",
        "We may share information with law enforcement or regulators where required by applicable law.",
        "In the event of a merger, acquisition or sale of assets, your personal data may be transferred to the acquiring entity.",
        "Third-party software development kits integrated in the {product} may collect information about your device.",
    ]),
    ("Cookies and similar technologies", [
        "We and our partners use cookies, pixels and similar tracking technologies to collect information about your browsing.",
        "You can control cookies through your browser settings, although disabling them may affect the functionality of the {product}.",
        "Analytics cookies help us understand how visitors interact with the {product}.",
    ]),
    ("Data retention", [
        "We retain personal data only for as long as necessary to fulfil the purposes described in this policy.",
        "Account information is retained while your account is active and deleted within {days} days after closure.",
        "Log data is kept for {days} days unless a longer retention period is required by law.",
    ]),
    ("Your rights", [
        "Depending on where you live, you may have the right to access, rectify, erase or restrict the processing of your personal data.",
        "You have the right to object to processing and the right to data portability.",
        "You may withdraw your consent at any time without affecting the lawfulness of processing based on consent before its withdrawal.",
        "You have the right to lodge a complaint with a supervisory authority.",
        "California residents may request disclosure of the categories of personal information we collect under the CCPA.",
        "To exercise your rights, please contact us at {email}.",
    ]),
    ("International transfers", [
        "Your information may be transferred to and processed in {country}, where data protection laws may differ from those in your country.",
        "Where we transfer personal data outside the European Economic Area, we rely on standard contractual clauses approved by the European Commission.",
    ]),
    ("Children", [
        "The {product} is not directed to children under the age of 13 and we do not knowingly collect personal data from children.",
        "If we learn that we have collected personal information from a child, we will delete that information promptly.",
    ]),
    ("Security", [
        "We implement appropriate technical and organizational measures to protect your personal data against unauthorized access.",
        "No method of transmission over the internet is completely secure, and we cannot guarantee absolute security of your data.",
    ]),
    ("Changes and contact", [
        "We may update this privacy policy from time to time and will notify you of any material changes.",
        "If you have questions about this privacy policy or our data practices, contact our data protection officer at {email}.",
        "The effective date of this policy is shown at the top of this page.",
    ]),
]

OTHER_KINDS = {
    "news": [
        "The council voted on Tuesday to approve the new housing development on the edge of town.",
        "Residents raised concerns about traffic and the loss of green space during the public consultation.",
        "The mayor said the project would create hundreds of jobs and provide affordable homes for young families.",
        "Shares in the company fell sharply after it reported lower than expected quarterly earnings.",
        "Analysts said the results reflected weaker demand in overseas markets and rising costs.",
        "Heavy rain caused flooding in several villages, and emergency services rescued dozens of people.",
        "The minister announced a review of the school funding formula, which has been criticised by teachers.",
        "Police have appealed for witnesses after a collision on the main road early on Sunday morning.",
        "The festival returns this summer with a line-up of local bands and international artists.",
        "Officials expect the bridge repairs to be completed by the end of the year.",
    ],
    "recipe": [
        "Preheat the oven to 180 degrees and line a baking tin with parchment paper.",
        "Whisk the eggs and sugar together until pale and fluffy, then fold in the sifted flour.",
        "Melt the butter in a small pan and stir it gently into the batter.",
        "Chop the onions and garlic finely and fry them in olive oil until soft.",
        "Add the tomatoes, a pinch of salt and a handful of basil, then simmer for twenty minutes.",
        "Serve the pasta immediately with grated parmesan and a drizzle of olive oil.",
        "Leave the cake to cool in the tin for ten minutes before turning it out onto a wire rack.",
        "This recipe serves four people and can be prepared a day in advance.",
        "For a vegetarian version, replace the chicken stock with vegetable stock.",
    ],
    "product": [
        "The new wireless headphones deliver rich sound and up to thirty hours of battery life.",
        "Active noise cancellation blocks out background noise so you can focus on your music.",
        "The lightweight aluminium frame makes this laptop easy to carry wherever you go.",
        "Our running shoes feature a breathable mesh upper and a cushioned midsole for long distances.",
        "Order today and get free delivery on all purchases over fifty dollars.",
        "Available in five colours, the water bottle keeps drinks cold for twenty-four hours.",
        "Customers love the intuitive controls and the sleek, modern design.",
        "Every purchase comes with a two-year warranty and a thirty-day money-back guarantee.",
        "Compare models to find the tablet that best suits your needs and budget.",
    ],
    "sports": [
        "The home side took the lead after ten minutes with a powerful header from a corner.",
        "The visitors equalised just before half-time when their striker converted a penalty.",
        "A late goal secured all three points and moved the club into the top four.",
        "The coach praised the defence for keeping a clean sheet against strong opposition.",
        "She won the final in straight sets to claim her first major title.",
        "The marathon attracted more than ten thousand runners despite the heat.",
        "The team will travel away next weekend to face the league leaders.",
        "Injuries to two key players have left the squad short of options in midfield.",
    ],
    "about": [
        "Founded in a small garage, our company has grown into a team of passionate engineers and designers.",
        "Our mission is to make beautiful tools that help people work better together.",
        "We believe in honest design, sustainable materials and long-lasting products.",
        "Today our products are used by thousands of customers in more than forty countries.",
        "Meet the team behind the product and learn about the values that guide our work.",
        "We are proud to support local charities and community projects every year.",
        "Our headquarters are located in a renovated warehouse near the harbour.",
    ],
    "jobs": [
        "We are looking for a senior software engineer to join our growing platform team.",
        "You will design, build and maintain scalable backend services.",
        "The ideal candidate has five years of experience with distributed systems.",
        "We offer a competitive salary, flexible working hours and a generous holiday allowance.",
        "Send your CV and a short cover letter explaining why you would like to join us.",
        "This role is based in our city centre office with the option to work remotely two days a week.",
        "Interviews will take place over video call during the first two weeks of next month.",
    ],
    "blog": [
        "Last weekend we finally took the trip to the mountains we had been planning for months.",
        "The trail started gently through pine forest before climbing steeply towards the ridge.",
        "At the top, the view across the valley made every step worth it.",
        "In this post I want to share a few tips for anyone planning a similar hike.",
        "Pack more water than you think you need and always check the weather forecast.",
        "I have been learning to bake bread at home and it has become my favourite hobby.",
        "Thanks for reading, and let me know in the comments what you would like me to write about next.",
    ],
    "help": [
        "To reset your password, click the link on the sign-in page and follow the instructions.",
        "If the app crashes on startup, try reinstalling it from the store.",
        "You can change the display language in the settings menu under General.",
        "Orders usually ship within two business days and arrive within a week.",
        "To return an item, print the prepaid label and drop the parcel at any post office.",
        "Our support team is available by chat from Monday to Friday.",
        "Make sure your device is running the latest version of the operating system.",
    ],
    "game": [
        "Collect coins, unlock new characters and race through twenty exciting levels.",
        "Challenge your friends in multiplayer mode and climb the global leaderboard.",
        "New seasonal events bring exclusive rewards every month.",
        "Build your city, manage resources and defend your walls against invaders.",
        "Tap to jump, swipe to dodge and avoid the obstacles as the speed increases.",
        "Download now and get a welcome bonus of five hundred gems.",
    ],
}


def policy_doc(rng):
    company = rng.choice(COMPANIES)
    product = rng.choice(PRODUCTS)
    title = rng.choice(["Privacy Policy", "Privacy Notice", "Privacy Statement", "Data Protection Notice"])
    out = [title]
    sections = [POLICY_SECTIONS[0]] + rng.sample(POLICY_SECTIONS[1:], rng.randint(4, len(POLICY_SECTIONS) - 1))
    for name, pool in sections:
        out.append(name)
        sents = rng.sample(pool, rng.randint(1, min(4, len(pool))))
        out.append(" ".join(fill(s, rng, company, product) for s in sents))
    return "\n\n".join(out) + "\n"


def other_doc(rng):
    kinds = list(OTHER_KINDS)
    kind = rng.choice(kinds)
    out = []
    for _ in range(rng.randint(2, 5)):
        pool = OTHER_KINDS[kind if rng.random() < 0.8 else rng.choice(kinds)]
        out.append(" ".join(rng.sample(pool, rng.randint(2, min(4, len(pool))))))
    return "\n\n".join(out) + "\n"


def write_split(name, n_policy, n_other, seed):
    rng = random.Random(seed)
    d = os.path.join(ROOT, name)
    os.makedirs(d, exist_ok=True)
    for f in os.listdir(d):
        os.remove(os.path.join(d, f))
    labels = []
    docs = [("policy", policy_doc) for _ in range(n_policy)] + [("other", other_doc) for _ in range(n_other)]
    rng.shuffle(docs)
    for i, (label, gen) in enumerate(docs):
        fname = "%s_%03d.txt" % (name, i)
        with open(os.path.join(d, fname), "w") as fh:
            fh.write(gen(rng))
        labels.append("%s\t%s" % (fname, label))
    with open(os.path.join(d, "labels.tsv"), "w") as fh:
        fh.write("\n".join(labels) + "\n")


def main():
    write_split("train", 64, 64, 20231)
    write_split("holdout", 15, 15, 777)
    return 0


if __name__ == "__main__":
    sys.exit(main())
