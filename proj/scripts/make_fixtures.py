#!/usr/bin/env python3
"""Regenerate the bundled replay fixtures.

    fixtures/archive/          record/replay archive (index.tsv + <kind>/<hash>.txn)
    fixtures/domains.txt       the 10 batch domains
    fixtures/truth.tsv         ground truth for those domains
    fixtures/walkthrough/      flows, relations and app policies for the audit demo

The archive also holds loop-redirect.example, which is not in domains.txt; it
exists to drive the request budget to its limit.

Certificates are Ed25519 with a fixed key, so the output is byte-identical on
every run. Needs the `cryptography` package.
"""

import datetime
import hashlib
import os
import shutil

from cryptography import x509
from cryptography.hazmat.primitives import serialization
from cryptography.hazmat.primitives.asymmetric import ed25519
from cryptography.x509.oid import NameOID

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "fixtures")
ARCHIVE = os.path.join(ROOT, "archive")
STAMP = "2026-01-15T00:00:00Z"
MAGIC = "orgtrace-fixture/1"
EV_OID = "2.23.140.1.1"
OV_OID = "2.23.140.1.2.2"
DV_OID = "2.23.140.1.2.1"

KEY = ed25519.Ed25519PrivateKey.from_private_bytes(hashlib.sha256(b"orgtrace fixture key").digest())

index = {}


def write_txn(kind, key, status=200, body=b"", headers=(), error=None):
    if isinstance(body, str):
        body = body.encode("utf-8")
    name = hashlib.sha256(key.encode("utf-8")).hexdigest()[:16]
    rel = f"{kind}/{name}.txn"
    lines = [MAGIC, f"kind: {kind}", f"key: {key}", f"status: {status}"]
    if error:
        lines.append(f"error: {error}")
    for k, v in headers:
        lines.append(f"header: {k}: {v}")
    lines.append(f"body-length: {len(body)}")
    lines.append("body-sha256: " + hashlib.sha256(body).hexdigest())
    os.makedirs(os.path.join(ARCHIVE, kind), exist_ok=True)
    with open(os.path.join(ARCHIVE, rel), "wb") as f:
        f.write(("\n".join(lines) + "\n\n").encode("utf-8") + body)
    index[key] = (kind, rel)


def page(url, html, status=200):
    write_txn("http", "GET " + url, status, html, [("Content-Type", "text/html; charset=utf-8")])


def redirect(url, location, status=301):
    write_txn("http", "GET " + url, status, "", [("Location", location)])


def http_error(url, error):
    write_txn("http", "GET " + url, 0, "", error=error)


def search(query, urls):
    write_txn("search", "SEARCH google-cse " + query, 200, "\n".join(urls))


def whois(server, query, text):
    write_txn("whois", f"WHOIS {server} {query}", 0, text)


def whois_error(server, query, error):
    write_txn("whois", f"WHOIS {server} {query}", 0, "", error=error)


def cert(host, org=None, policy=DV_OID, sans=()):
    subject = [x509.NameAttribute(NameOID.COMMON_NAME, host)]
    if org:
        subject.append(x509.NameAttribute(NameOID.ORGANIZATION_NAME, org))
        subject.append(x509.NameAttribute(NameOID.COUNTRY_NAME, "US"))
    issuer = x509.Name([
        x509.NameAttribute(NameOID.COUNTRY_NAME, "US"),
        x509.NameAttribute(NameOID.ORGANIZATION_NAME, "Fixture Trust Services"),
        x509.NameAttribute(NameOID.COMMON_NAME, "Fixture Issuing CA 1"),
    ])
    names = [x509.DNSName(host)] + [x509.DNSName(s) for s in sans]
    serial = int.from_bytes(hashlib.sha256(host.encode()).digest()[:8], "big")
    builder = (
        x509.CertificateBuilder()
        .subject_name(x509.Name(subject))
        .issuer_name(issuer)
        .public_key(KEY.public_key())
        .serial_number(serial)
        .not_valid_before(datetime.datetime(2026, 1, 1, tzinfo=datetime.timezone.utc))
        .not_valid_after(datetime.datetime(2027, 1, 1, tzinfo=datetime.timezone.utc))
        .add_extension(x509.SubjectAlternativeName(names), critical=False)
        .add_extension(
            x509.CertificatePolicies([x509.PolicyInformation(x509.ObjectIdentifier(policy), None)]),
            critical=False,
        )
    )
    der = builder.sign(KEY, None).public_bytes(serialization.Encoding.DER)
    write_txn("tls", f"TLS {host}:443", 0, der)


def tls_error(host, error):
    write_txn("tls", f"TLS {host}:443", 0, "", error=error)


def thin_record(domain, registrar_server):
    return (
        f"   Domain Name: {domain.upper()}\n"
        f"   Registry Domain ID: {hashlib.md5(domain.encode()).hexdigest()[:10]}_DOMAIN\n"
        f"   Registrar WHOIS Server: {registrar_server}\n"
        f"   Registrar URL: http://{registrar_server.replace('whois.', 'www.')}\n"
        "   Updated Date: 2025-11-03T10:12:44Z\n"
        "   Creation Date: 2019-04-17T08:01:02Z\n"
        "   Registrar: Fixture Registrar, LLC\n"
        "   Name Server: NS1.FIXTURE-DNS.EXAMPLE\n"
        "   DNSSEC: unsigned\n"
        ">>> Last update of whois database: 2026-01-15T00:00:00Z <<<\n"
    )


def registrar_record(domain, org_line):
    return (
        f"Domain Name: {domain}\n"
        "Registrar: Fixture Registrar, LLC\n"
        "Registrar IANA ID: 9999\n"
        + (org_line + "\n" if org_line is not None else "")
        + "Registrant State/Province: CA\n"
        "Registrant Country: US\n"
        "Admin Email: Select Request Email Form at https://registrar.example/contact\n"
        "Name Server: ns1.fixture-dns.example\n"
        "DNSSEC: unsigned\n"
    )


def homepage(title, links, body="Welcome to our site. Browse our products and stories below."):
    anchors = "\n".join(f'      <li><a href="{href}">{text}</a></li>' for href, text in links)
    return f"""<!DOCTYPE html>
<html lang="en">
<head><meta charset="utf-8"><title>{title}</title>
<script>window.dataLayer = window.dataLayer || [];</script>
</head>
<body>
  <header><nav><a href="/">Home</a> <a href="/products">Products</a> <a href="/blog">Blog</a></nav></header>
  <main>
    <h1>{title}</h1>
    <p>{body}</p>
  </main>
  <footer>
    <ul>
{anchors}
    </ul>
  </footer>
</body>
</html>
"""


STANDARD_SECTIONS = [
    ("Information we collect",
     "We collect information you provide directly to us, such as your name, email address and payment details, "
     "as well as device identifiers, IP address and usage data collected automatically when you use the service."),
    ("How we use your information",
     "We use personal data to provide and improve the service, to personalise content, to measure advertising "
     "performance and to comply with our legal obligations."),
    ("How we share your information",
     "We share personal data with service providers who process it on our behalf and with law enforcement "
     "where required by law. We do not sell your personal information."),
    ("Cookies and similar technologies",
     "We and our partners use cookies, pixels and similar tracking technologies to collect information about "
     "your browsing and to remember your preferences."),
    ("Data retention",
     "We retain personal data only for as long as necessary to fulfil the purposes described in this policy."),
    ("Your rights",
     "Depending on where you live, you may have the right to access, rectify, erase or restrict the processing "
     "of your personal data. You have the right to lodge a complaint with a supervisory authority."),
]


def policy_page(title, intro_paragraphs, lang="en", sections=STANDARD_SECTIONS):
    parts = [f"<h1>{title}</h1>"]
    parts += [f"<p>{p}</p>" for p in intro_paragraphs]
    for heading, text in sections:
        parts.append(f"<h2>{heading}</h2>")
        parts.append(f"<p>{text}</p>")
    body = "\n    ".join(parts)
    return f"""<!DOCTYPE html>
<html lang="{lang}">
<head><meta charset="utf-8"><title>{title}</title>
<style>body {{ font-family: sans-serif; }}</style>
</head>
<body>
  <header><nav><a href="/">Home</a> <a href="/help">Help Center</a></nav></header>
  <article>
    {body}
  </article>
  <footer><a href="/terms">Terms</a> <a href="/contact">Contact us</a></footer>
</body>
</html>
"""


DEFAULT_LINKS = [("/terms", "Terms of Service"), ("/careers", "Careers"), ("/contact", "Contact")]


def build_archive():
    # 1. The TikTok controller paragraph behind a homepage footer link.
    d = "tiktok-fixture.example"
    page(f"https://{d}/", homepage("TikTok", DEFAULT_LINKS + [("/legal/privacy-policy?lang=en", "Privacy Policy")]))
    page(f"https://{d}/legal/privacy-policy?lang=en", policy_page("Privacy Policy", [
        "Welcome to TikTok (the “Platform”). The Platform is provided and controlled by TikTok Inc. "
        "(“TikTok”, “we” or “us”). We are committed to protecting and respecting "
        "your privacy. This Privacy Policy covers the experience we provide for users age 13 and over on our "
        "Platform.",
    ]))
    cert(d, "TikTok Inc.", OV_OID, sans=[f"www.{d}"])
    whois(f"whois.nic.example", d, thin_record(d, "whois.fixture-registrar.example"))
    whois("whois.fixture-registrar.example", d,
          registrar_record(d, "Registrant Organization: TikTok Inc."))

    # 2. Redirect to a different registrable domain, redacted WHOIS.
    d = "unseenreport.com"
    redirect(f"https://{d}/", "https://www.google.com/", 302)
    page("https://www.google.com/", homepage("Google", [("https://policies.google.com/privacy", "Privacy"),
                                                         ("https://policies.google.com/terms", "Terms")],
                                             "Search the world's information."))
    page("https://policies.google.com/privacy", policy_page("Google Privacy Policy", [
        "This Privacy Policy applies to all of the services offered by Google LLC (“Google”, "
        "“we” or “us”) and its affiliates. Google LLC is the data controller responsible "
        "for your information.",
    ]))
    tls_error(d, "HandshakeFailure")
    whois("whois.verisign-grs.com", d, thin_record(d, "whois.namecheap.example"))
    whois("whois.namecheap.example", d, registrar_record(d, "Registrant Organization: Redacted for Privacy"))

    # 3. All three sources agree.
    d = "acme-analytics.example"
    page(f"https://{d}/", homepage("Acme Analytics", DEFAULT_LINKS + [("/privacy", "Privacy Notice")]))
    page(f"https://{d}/privacy", policy_page("Privacy Notice", [
        "Acme Analytics GmbH (“we”, “us”) is the data controller responsible for the "
        "processing of personal data described in this notice.",
    ]))
    cert(d, "Acme Analytics GmbH", EV_OID, sans=[f"collect.{d}"])
    whois("whois.nic.example", d, thin_record(d, "whois.fixture-registrar.example"))
    whois("whois.fixture-registrar.example", d,
          registrar_record(d, "Registrant Organization: Acme Analytics GmbH"))

    # 4. API host with no website; WHOIS and certificate know the holder.
    d = "backend-only.example"
    http_error(f"https://{d}/", "TransportFailure")
    http_error(f"http://{d}/", "TransportFailure")
    search(d, [])
    search(f"{d} privacy policy", [])
    cert(d, "Backend Holdings LLC", OV_OID, sans=[f"api.{d}"])
    whois("whois.nic.example", d, thin_record(d, "whois.fixture-registrar.example"))
    whois("whois.fixture-registrar.example", d,
          registrar_record(d, "Registrant Organization: Backend Holdings LLC"))

    # 5. Policy only in Spanish.
    d = "spanish-site.example"
    page(f"https://{d}/", homepage("Ejemplo Medios", DEFAULT_LINKS + [("/privacidad", "Privacy")]))
    page(f"https://{d}/privacidad", policy_page("Política de privacidad", [
        "Ejemplo Medios S.L. (“nosotros”) es el responsable del tratamiento de los datos personales "
        "que recogemos a través de este sitio web y de nuestras aplicaciones.",
    ], lang="es", sections=[
        ("Datos que recogemos",
         "Recogemos los datos que nos facilitas al registrarte, como tu nombre, tu correo electrónico y tu "
         "número de teléfono, así como datos de uso y del dispositivo."),
        ("Tus derechos",
         "Puedes ejercer tus derechos de acceso, rectificación, supresión y oposición "
         "escribiendo a nuestro delegado de protección de datos. También puedes presentar una "
         "reclamación ante la autoridad de control."),
    ]))
    search(f"{d} privacy policy", [f"https://{d}/privacidad"])
    cert(d, "Ejemplo Medios S.L.", OV_OID)
    whois("whois.nic.example", d, thin_record(d, "whois.fixture-registrar.example"))
    whois("whois.fixture-registrar.example", d,
          registrar_record(d, "Registrant Organization: Ejemplo Medios S.L."))

    # 6. Landing page without a policy link; search finds an about page; WHOIS redacted.
    d = "landing-only.example"
    page(f"https://{d}/", homepage("Landing Labs", [("/signup", "Sign up"), ("/pricing", "Pricing")],
                                   "The fastest way to build beautiful landing pages. Start your free trial."))
    search(f"{d} privacy policy", [f"https://{d}/about", "https://reviews.example/landing-only"])
    page(f"https://{d}/about", """<!DOCTYPE html>
<html><head><title>About</title></head><body>
<h1>About the product</h1>
<p>Drag and drop sections, pick a colour palette and publish your page in minutes.</p>
<p>Our templates are tuned for conversion and load quickly on every device, from phones to large monitors.</p>
<p>Pricing starts at nine dollars a month with a fourteen day free trial and no credit card required.</p>
<p>Join thousands of founders, marketers and designers who launch their ideas with a single page.</p>
</body></html>
""")
    cert(d)
    whois("whois.nic.example", d, thin_record(d, "whois.fixture-registrar.example"))
    whois("whois.fixture-registrar.example", d, registrar_record(
        d, "Registrant Organization: Privacy service provided by Withheld for Privacy ehf"))

    # 7. Plain HTTP only.
    d = "httponly-tracker.example"
    http_error(f"https://{d}/", "TransportFailure")
    page(f"http://{d}/", homepage("Tracker Metrics", DEFAULT_LINKS + [("/privacy.html", "Privacy Policy")]))
    page(f"http://{d}/privacy.html", policy_page("Privacy Policy", [
        "The Tracker Metrics measurement service is provided by Tracker Metrics Ltd (“we”, "
        "“us”). We act as controller for data collected through our tags.",
    ]))
    tls_error(d, "NoTls")
    whois("whois.nic.example", d, thin_record(d, "whois.fixture-registrar.example"))
    whois("whois.fixture-registrar.example", d, registrar_record(d, "Registrant Organization: "))

    # 8. Redirect within the same registrable domain.
    d = "redirect-same.example"
    redirect(f"https://{d}/", f"https://www.{d}/")
    page(f"https://www.{d}/", homepage("Northwind", DEFAULT_LINKS + [("/privacy-statement", "Privacy Statement")]))
    page(f"https://www.{d}/privacy-statement", policy_page("Privacy Statement", [
        "This website is operated by Northwind Traders Inc. and this statement explains how we handle your "
        "personal data as controller.",
    ]))
    cert(f"{d}", None, DV_OID, sans=[f"www.{d}"])
    whois("whois.nic.example", d, thin_record(d, "whois.fixture-registrar.example"))
    whois("whois.fixture-registrar.example", d, registrar_record(d, "Registrant Organization: REDACTED FOR PRIVACY"))

    # 9. Policy that never names its controller.
    d = "cdn-assets.example"
    page(f"https://{d}/", homepage("Static assets", [("/privacy", "Privacy Policy"), ("/status", "Status")],
                                   "This host serves static files for our customers."))
    page(f"https://{d}/privacy", policy_page("Privacy Policy", [
        "This policy explains how we collect and use information when you request files from this network. "
        "We are responsible for the processing of request logs and we keep them private.",
        "If you have questions about this policy, you can contact us using the form on our website.",
    ]))
    search(f"{d} privacy policy", [f"https://{d}/privacy"])
    cert(d, "Fastedge Networks Inc.", OV_OID)
    whois("whois.nic.example", d, thin_record(d, "whois.fixture-registrar.example"))
    whois("whois.fixture-registrar.example", d,
          registrar_record(d, "Registrant Organization: Fastedge Networks Inc."))

    # 10. First candidate is broken, the second one works.
    d = "mobile-ads.example"
    page(f"https://{d}/", homepage("Mobile Ads", [("/legal", "Legal"), ("/p1", "Privacy Policy"),
                                                  ("/data-protection", "Data protection")]))
    page(f"https://{d}/p1", "<html><body><h1>Not found</h1></body></html>", 404)
    page(f"https://{d}/data-protection", policy_page("Data protection information", [
        "Mobile Ads Network Ltd. (“we”, “us”) is the controller of personal data "
        "processed in connection with our advertising SDK.",
    ]))
    cert(d)
    whois("whois.nic.example", d, thin_record(d, "whois.fixture-registrar.example"))
    whois("whois.fixture-registrar.example", d,
          registrar_record(d, "Registrant Organization: Mobile Ads Network Ltd."))

    # Not part of the batch: a redirect loop that exhausts the request budget.
    d = "loop-redirect.example"
    redirect(f"https://{d}/", f"https://{d}/a", 302)
    redirect(f"https://{d}/a", f"https://{d}/b", 302)
    redirect(f"https://{d}/b", f"https://{d}/a", 302)
    redirect(f"http://{d}/", f"https://{d}/", 301)
    search(d, [f"https://{d}/"])
    search(f"{d} privacy policy", [])
    tls_error(d, "NoTls")
    whois("whois.nic.example", d, thin_record(d, "whois.fixture-registrar.example"))
    whois("whois.fixture-registrar.example", d, registrar_record(d, None))

    with open(os.path.join(ARCHIVE, "index.tsv"), "w", encoding="utf-8", newline="\n") as f:
        for key in sorted(index):
            kind, rel = index[key]
            f.write(f"{key}\t{kind}\t{rel}\t{STAMP}\n")


DOMAINS = [
    "tiktok-fixture.example",
    "unseenreport.com",
    "acme-analytics.example",
    "backend-only.example",
    "spanish-site.example",
    "landing-only.example",
    "httponly-tracker.example",
    "redirect-same.example",
    "cdn-assets.example",
    "mobile-ads.example",
]

TRUTH = [
    ("tiktok-fixture.example", "TikTok Inc.", "policy, controller paragraph"),
    ("unseenreport.com", "Unseen Report Media", "holder unknown to every technique"),
    ("acme-analytics.example", "Acme Analytics GmbH", ""),
    ("backend-only.example", "Backend Holdings LLC", "no website"),
    ("spanish-site.example", "Ejemplo Medios S.L.", "policy not in English"),
    ("landing-only.example", "Landing Labs Inc.", "redacted WHOIS, no policy"),
    ("httponly-tracker.example", "Tracker Metrics Ltd", "plain HTTP"),
    ("redirect-same.example", "Northwind Traders Inc.", ""),
    ("cdn-assets.example", "Fastedge Networks Inc.", "policy without controller"),
    ("mobile-ads.example", "Mobile Ads Network Ltd.", ""),
]


def write_walkthrough():
    w = os.path.join(ROOT, "walkthrough")
    os.makedirs(os.path.join(w, "policies"), exist_ok=True)
    flows = [
        ("app.alpha", "api.tiktok-fixture.example", "https", "device_id,location"),
        ("app.alpha", "collect.acme-analytics.example", "https", "advertising_id"),
        ("app.beta", "collect.acme-analytics.example", "https", "advertising_id,device_id"),
        ("app.beta", "api.backend-only.example", "https", "email"),
        ("app.gamma", "httponly-tracker.example", "http", "email,location"),
        ("app.gamma", "sdk.mobile-ads.example", "https", "advertising_id"),
        ("app.gamma", "cdn.landing-only.example", "https", "device_id"),
        ("app.delta", "sdk.mobile-ads.example", "https", "advertising_id"),
    ]
    with open(os.path.join(w, "flows.tsv"), "w", encoding="utf-8") as f:
        f.write("# app_id\tdestination\ttransport\tdata types\n")
        for row in flows:
            f.write("\t".join(row) + "\n")
    with open(os.path.join(w, "relations.tsv"), "w", encoding="utf-8") as f:
        f.write("# child\tparent\n")
        f.write("TikTok Inc.\tByteDance Ltd.\n")
        f.write("Tracker Metrics Ltd\tMobile Ads Network Ltd.\n")
    policies = {
        "app.alpha": [
            "Alpha Notes is developed by Alpha Apps Inc. and this policy describes how we process your data.",
            "We share device identifiers with our parent partner ByteDance Ltd. to operate social features.",
            "Advertising identifiers are shared with Acme Analytics GmbH for audience measurement.",
        ],
        "app.beta": [
            "Beta Weather is operated by Beta Forecasts Ltd. and we care about your privacy.",
            "We use Acme Analytics GmbH to understand how the app is used.",
        ],
        "app.gamma": [
            "Gamma Puzzle is provided by Gamma Games Oy and this notice explains our data practices.",
            "We may share information with advertising partners such as Sunrise Mediation Inc. to show ads.",
        ],
    }
    for app, paragraphs in policies.items():
        with open(os.path.join(w, "policies", app + ".txt"), "w", encoding="utf-8") as f:
            f.write("\n\n".join(paragraphs) + "\n")


def main():
    if os.path.isdir(ARCHIVE):
        shutil.rmtree(ARCHIVE)
    os.makedirs(ARCHIVE)
    build_archive()
    with open(os.path.join(ROOT, "domains.txt"), "w", encoding="utf-8") as f:
        f.write("\n".join(DOMAINS) + "\n")
    with open(os.path.join(ROOT, "truth.tsv"), "w", encoding="utf-8") as f:
        f.write("# domain\texpected organization\tnotes\n")
        for domain, org, note in TRUTH:
            f.write(f"{domain}\t{org}\t{note}\n" if note else f"{domain}\t{org}\n")
    write_walkthrough()
    print(f"{len(index)} transactions in {ARCHIVE}")


if __name__ == "__main__":
    main()
